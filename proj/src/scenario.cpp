// SPDX-License-Identifier: Apache-2.0
#include "mris/scenario.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

#include <boost/algorithm/string.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

namespace mris::scenario {

namespace {

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double to_double(const std::string& key, const std::string& s) {
    try {
        std::size_t pos = 0;
        double v = std::stod(s, &pos);
        if (boost::trim_copy(s.substr(pos)).size() != 0) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw Error("schema", "key '" + key + "' expects a number, got '" + s + "'");
    }
}

long to_long(const std::string& key, const std::string& s) {
    double v = to_double(key, s);
    if (v != std::floor(v)) throw Error("schema", "key '" + key + "' expects an integer, got '" + s + "'");
    return static_cast<long>(v);
}

std::vector<double> to_list(const std::string& key, const std::string& s) {
    std::vector<std::string> parts;
    boost::split(parts, s, boost::is_any_of(","));
    std::vector<double> out;
    for (auto& p : parts) {
        boost::trim(p);
        if (!p.empty()) out.push_back(to_double(key, p));
    }
    return out;
}

std::string list_str(const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + fmt_double(v[i]);
    return s;
}

Point3 to_point(const std::string& key, const std::string& s) {
    auto v = to_list(key, s);
    if (v.size() != 3) throw Error("schema", "key '" + key + "' expects three comma-separated numbers");
    return {v[0], v[1], v[2]};
}

std::string point_str(const Point3& p) { return list_str({p.x(), p.y(), p.z()}); }

std::vector<Point3> to_points(const std::string& key, const std::string& s) {
    std::vector<std::string> groups;
    boost::split(groups, s, boost::is_any_of(";"));
    std::vector<Point3> out;
    for (auto& g : groups) {
        boost::trim(g);
        if (!g.empty()) out.push_back(to_point(key, g));
    }
    return out;
}

std::string points_str(const std::vector<Point3>& pts) {
    std::string s;
    for (std::size_t i = 0; i < pts.size(); ++i) s += (i ? "; " : "") + point_str(pts[i]);
    return s;
}

struct Field {
    std::string section;
    std::string key;
    std::function<std::string(const SystemConfig&)> get;  // empty for input-only aliases
    std::function<void(SystemConfig&, const std::string&)> set;
};

#define NUM_FIELD(sec, name)                                                        \
    Field {                                                                         \
        sec, #name, [](const SystemConfig& c) { return fmt_double(c.name); },       \
            [](SystemConfig& c, const std::string& v) { c.name = to_double(#name, v); } \
    }
#define INT_FIELD(sec, name)                                                          \
    Field {                                                                           \
        sec, #name, [](const SystemConfig& c) { return std::to_string(c.name); },     \
            [](SystemConfig& c, const std::string& v) {                               \
                c.name = static_cast<decltype(c.name)>(to_long(#name, v));            \
            }                                                                         \
    }
#define ALIAS(sec, name, body) \
    Field { sec, name, nullptr, [](SystemConfig& c, const std::string& v) body }

const std::vector<Field>& schema() {
    static const std::vector<Field> fields = {
        INT_FIELD("system", L),
        INT_FIELD("system", M_r),
        INT_FIELD("system", M_c),
        INT_FIELD("system", N_r),
        INT_FIELD("system", N_c),
        INT_FIELD("system", K),
        INT_FIELD("system", J),
        NUM_FIELD("system", P_max),
        ALIAS("system", "P_max_dBm", { c.P_max = dbm2watt(to_double("P_max_dBm", v)); }),
        NUM_FIELD("system", sigma2_U),
        NUM_FIELD("system", sigma2_E),
        ALIAS("system", "noise_dBm", {
            c.sigma2_U = c.sigma2_E = dbm2watt(to_double("noise_dBm", v));
        }),
        ALIAS("system", "sigma2_U_dBm", { c.sigma2_U = dbm2watt(to_double("sigma2_U_dBm", v)); }),
        ALIAS("system", "sigma2_E_dBm", { c.sigma2_E = dbm2watt(to_double("sigma2_E_dBm", v)); }),
        NUM_FIELD("system", beta0),
        ALIAS("system", "beta0_dB", { c.beta0 = db2lin(to_double("beta0_dB", v)); }),
        NUM_FIELD("system", kappa_BR),
        NUM_FIELD("system", kappa_RU),
        NUM_FIELD("system", kappa_RE),
        ALIAS("system", "kappa_dB", {
            c.kappa_BR = c.kappa_RU = c.kappa_RE = db2lin(to_double("kappa_dB", v));
        }),
        ALIAS("system", "kappa_BR_dB", { c.kappa_BR = db2lin(to_double("kappa_BR_dB", v)); }),
        ALIAS("system", "kappa_RU_dB", { c.kappa_RU = db2lin(to_double("kappa_RU_dB", v)); }),
        ALIAS("system", "kappa_RE_dB", { c.kappa_RE = db2lin(to_double("kappa_RE_dB", v)); }),
        NUM_FIELD("system", lambda_c),
        NUM_FIELD("system", d_R),
        NUM_FIELD("system", d_B),
        Field{"system", "Gamma_user", [](const SystemConfig& c) { return list_str(c.Gamma_user); },
              [](SystemConfig& c, const std::string& v) { c.Gamma_user = to_list("Gamma_user", v); }},
        ALIAS("system", "Gamma_user_bits", {
            c.Gamma_user = to_list("Gamma_user_bits", v);
            for (auto& g : c.Gamma_user) g = bits2nats(g);
        }),
        Field{"system", "Gamma_sense", [](const SystemConfig& c) { return list_str(c.Gamma_sense); },
              [](SystemConfig& c, const std::string& v) { c.Gamma_sense = to_list("Gamma_sense", v); }},
        NUM_FIELD("system", Gamma_sense_scale),

        Field{"geometry", "bs_pos", [](const SystemConfig& c) { return point_str(c.bs_pos); },
              [](SystemConfig& c, const std::string& v) { c.bs_pos = to_point("bs_pos", v); }},
        Field{"geometry", "mris_pos", [](const SystemConfig& c) { return point_str(c.mris_pos); },
              [](SystemConfig& c, const std::string& v) { c.mris_pos = to_point("mris_pos", v); }},
        Field{"geometry", "placement",
              [](const SystemConfig& c) {
                  return std::string(c.placement == Placement::Polar ? "polar" : "random");
              },
              [](SystemConfig& c, const std::string& v) {
                  if (v == "polar") c.placement = Placement::Polar;
                  else if (v == "random") c.placement = Placement::Random;
                  else throw Error("schema", "key 'placement' expects random|polar");
              }},
        Field{"geometry", "user_polar", [](const SystemConfig& c) { return points_str(c.user_polar); },
              [](SystemConfig& c, const std::string& v) { c.user_polar = to_points("user_polar", v); }},
        Field{"geometry", "eve_polar", [](const SystemConfig& c) { return points_str(c.eve_polar); },
              [](SystemConfig& c, const std::string& v) { c.eve_polar = to_points("eve_polar", v); }},
        NUM_FIELD("geometry", box_x_min),
        NUM_FIELD("geometry", box_x_max),
        NUM_FIELD("geometry", box_y_min),
        NUM_FIELD("geometry", box_y_max),
        NUM_FIELD("geometry", box_z_min),
        NUM_FIELD("geometry", box_z_max),
        NUM_FIELD("geometry", d_UU),
        NUM_FIELD("geometry", d_EE),
        NUM_FIELD("geometry", d_UE),
        INT_FIELD("geometry", placement_budget),

        NUM_FIELD("uncertainty", D_RE),
        NUM_FIELD("uncertainty", Theta_RE),
        NUM_FIELD("uncertainty", Psi_RE),
        ALIAS("uncertainty", "Theta_RE_deg", { c.Theta_RE = deg2rad(to_double("Theta_RE_deg", v)); }),
        ALIAS("uncertainty", "Psi_RE_deg", { c.Psi_RE = deg2rad(to_double("Psi_RE_deg", v)); }),
        NUM_FIELD("uncertainty", eps_nlos),
        NUM_FIELD("uncertainty", eps_nlos_scale),
        INT_FIELD("uncertainty", dpsi_grid),

        NUM_FIELD("algorithm", rho1),
        NUM_FIELD("algorithm", rho2_init),
        NUM_FIELD("algorithm", rho3_init),
        NUM_FIELD("algorithm", varpi1),
        NUM_FIELD("algorithm", bigM1),
        NUM_FIELD("algorithm", bigM2),
        NUM_FIELD("algorithm", tol_ao),
        NUM_FIELD("algorithm", tol_pdd_inner),
        NUM_FIELD("algorithm", tol_pdd_outer),
        NUM_FIELD("algorithm", pdd_threshold_init),
        INT_FIELD("algorithm", tau_max),
        INT_FIELD("algorithm", pdd_outer_max),
        INT_FIELD("algorithm", pdd_inner_max),
        INT_FIELD("algorithm", assign_rounds),
        INT_FIELD("algorithm", candidate_rounds),
        INT_FIELD("algorithm", assign_local_search),
        Field{"algorithm", "leakage_model",
              [](const SystemConfig& c) {
                  switch (c.leakage_model) {
                      case LeakageModel::Schur: return std::string("schur");
                      case LeakageModel::Taylor: return std::string("taylor");
                      default: return std::string("soc");
                  }
              },
              [](SystemConfig& c, const std::string& v) {
                  if (v == "soc") c.leakage_model = LeakageModel::Soc;
                  else if (v == "schur") c.leakage_model = LeakageModel::Schur;
                  else if (v == "taylor") c.leakage_model = LeakageModel::Taylor;
                  else throw Error("schema", "key 'leakage_model' expects soc|schur|taylor");
              }},

        INT_FIELD("experiment", seed),
        INT_FIELD("experiment", mc_samples),
    };
    return fields;
}

#undef NUM_FIELD
#undef INT_FIELD
#undef ALIAS

const Field* find_field(const std::string& section, const std::string& key) {
    for (const auto& f : schema())
        if (f.key == key && (section.empty() || f.section == section)) return &f;
    return nullptr;
}

}  // namespace

double SystemConfig::eps_nlos_value() const {
    return eps_nlos >= 0.0 ? eps_nlos : eps_nlos_scale * std::sqrt(kappa_RE);
}

double SystemConfig::gamma_user(int k) const {
    if (Gamma_user.empty()) return 0.0;
    if (Gamma_user.size() == 1) return Gamma_user[0];
    return Gamma_user.at(static_cast<std::size_t>(k));
}

SystemConfig parse_config(const std::string& text) {
    namespace pt = boost::property_tree;
    pt::ptree tree;
    std::istringstream in(text);
    try {
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw Error("schema", std::string("parse failure: ") + e.what());
    }
    SystemConfig cfg;
    for (const auto& [section, body] : tree) {
        if (body.empty() && !body.data().empty())
            throw Error("schema", "key '" + section + "' must live inside a section");
        for (const auto& [key, node] : body) {
            const Field* f = find_field(section, key);
            if (!f) throw Error("schema", "unknown key '" + section + "." + key + "'");
            f->set(cfg, boost::trim_copy(node.data()));
        }
    }
    validate(cfg);
    return cfg;
}

SystemConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("schema", "cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string dump_config(const SystemConfig& cfg) {
    std::string out, current;
    for (const auto& f : schema()) {
        if (!f.get) continue;
        if (f.section != current) {
            out += (current.empty() ? "" : "\n") + std::string("[") + f.section + "]\n";
            current = f.section;
        }
        out += f.key + " = " + f.get(cfg) + "\n";
    }
    return out;
}

void apply_override(SystemConfig& cfg, const std::string& assignment) {
    auto eq = assignment.find('=');
    if (eq == std::string::npos) throw Error("schema", "override '" + assignment + "' lacks '='");
    std::string lhs = boost::trim_copy(assignment.substr(0, eq));
    std::string rhs = boost::trim_copy(assignment.substr(eq + 1));
    std::string section, key = lhs;
    if (auto dot = lhs.find('.'); dot != std::string::npos) {
        section = lhs.substr(0, dot);
        key = lhs.substr(dot + 1);
    }
    const Field* f = find_field(section, key);
    if (!f) throw Error("schema", "unknown override key '" + lhs + "'");
    f->set(cfg, rhs);
}

void validate(const SystemConfig& c) {
    auto fail = [](const std::string& m) { throw Error("validation", m); };
    if (c.L < 1) fail("L must be >= 1");
    if (c.M_r < 1 || c.M_c < 1) fail("M_r and M_c must be >= 1");
    bool baseline = c.N_r == 0 && c.N_c == 0;
    if (!baseline && (c.N_r < 1 || c.N_c < 1 || c.N_r > c.M_r || c.N_c > c.M_c))
        fail("need 1 <= N_r <= M_r and 1 <= N_c <= M_c (or N_r = N_c = 0)");
    if (c.K < 1) fail("K must be >= 1");
    if (c.J < 0) fail("J must be >= 0");
    for (double v : {c.P_max, c.sigma2_U, c.sigma2_E, c.beta0, c.kappa_BR, c.kappa_RU, c.kappa_RE, c.D_RE,
                     c.Theta_RE, c.Psi_RE, c.d_UU, c.d_EE, c.d_UE, c.Gamma_sense_scale})
        if (!(v >= 0.0)) fail("powers, gains, distances and bounds must be nonnegative");
    if (!(c.sigma2_U > 0.0) || !(c.sigma2_E > 0.0)) fail("noise powers must be positive");
    if (!(c.lambda_c > 0.0) || !(c.d_R > 0.0) || !(c.d_B > 0.0)) fail("wavelength and spacings must be positive");
    if (c.varpi1 < 0.8 || c.varpi1 > 0.9) fail("varpi1 must lie in [0.8, 0.9]");
    if (c.rho1 < 0.0 || c.rho2_init <= 0.0 || c.rho3_init <= 0.0) fail("penalty parameters must be positive");
    if (c.Gamma_user.size() > 1 && static_cast<int>(c.Gamma_user.size()) != c.K)
        fail("Gamma_user must hold one value or K values");
    if (!c.Gamma_sense.empty() && c.Gamma_sense.size() > 1 && static_cast<int>(c.Gamma_sense.size()) != c.J)
        fail("Gamma_sense must hold one value or J values");
    if (c.dpsi_grid < 2) fail("dpsi_grid must be >= 2");
    if (c.tau_max < 1) fail("tau_max must be >= 1");
    if (c.mc_samples < 0) fail("mc_samples must be >= 0");
    if (c.placement == Placement::Polar) {
        if (static_cast<int>(c.user_polar.size()) != c.K) fail("user_polar must list K points");
        if (static_cast<int>(c.eve_polar.size()) != c.J) fail("eve_polar must list J points");
    }
}

bool equal_configs(const SystemConfig& a, const SystemConfig& b) { return dump_config(a) == dump_config(b); }

std::string config_hash(const SystemConfig& cfg) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char ch : dump_config(cfg)) {
        h ^= ch;
        h *= 1099511628211ULL;
    }
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

Point3 cartesian_from_polar(const Point3& origin, const PolarView& pv) {
    double ce = std::cos(pv.elevation);
    return origin + Point3(pv.d * ce * std::sin(pv.azimuth), pv.d * ce * std::cos(pv.azimuth),
                           pv.d * std::sin(pv.elevation));
}

PolarView polar_from_mris(const NodeLayout& layout, const Point3& point) {
    Point3 r = point - layout.mris_pos;
    double d = r.norm();
    if (!(d > 0.0)) throw Error("geometry", "point coincides with the MRIS position");
    PolarView pv;
    pv.d = d;
    pv.elevation = std::asin(std::clamp(r.z() / d, -1.0, 1.0));
    double horiz = std::hypot(r.x(), r.y());
    pv.azimuth = horiz > 0.0 ? std::atan2(r.x(), r.y()) : 0.0;
    if (pv.azimuth <= -kPi) pv.azimuth = kPi;
    return pv;
}

NodeLayout place_nodes(const SystemConfig& cfg, Rng& rng) {
    NodeLayout lay;
    lay.bs_pos = cfg.bs_pos;
    lay.mris_pos = cfg.mris_pos;
    if (cfg.placement == Placement::Polar) {
        for (const auto& p : cfg.user_polar)
            lay.user_pos.push_back(cartesian_from_polar(cfg.mris_pos, {p.x(), deg2rad(p.y()), deg2rad(p.z())}));
        for (const auto& p : cfg.eve_polar)
            lay.eve_pos.push_back(cartesian_from_polar(cfg.mris_pos, {p.x(), deg2rad(p.y()), deg2rad(p.z())}));
        return lay;
    }
    std::uniform_real_distribution<double> ux(cfg.box_x_min, cfg.box_x_max);
    std::uniform_real_distribution<double> uy(cfg.box_y_min, cfg.box_y_max);
    std::uniform_real_distribution<double> uz(cfg.box_z_min, cfg.box_z_max);
    long attempts = 0;
    std::string last_rule = "none";
    auto draw = [&](bool is_user) {
        while (attempts < cfg.placement_budget) {
            ++attempts;
            Point3 p(ux(rng), uy(rng), uz(rng));
            bool ok = true;
            for (const auto& q : lay.user_pos) {
                double floor = is_user ? cfg.d_UU : cfg.d_UE;
                if ((p - q).norm() < floor) {
                    ok = false;
                    last_rule = is_user ? "d_UU" : "d_UE";
                    break;
                }
            }
            for (const auto& q : lay.eve_pos) {
                if (!ok) break;
                double floor = is_user ? cfg.d_UE : cfg.d_EE;
                if ((p - q).norm() < floor) {
                    ok = false;
                    last_rule = is_user ? "d_UE" : "d_EE";
                }
            }
            if (ok) return p;
        }
        throw Error("placement", "rejection budget exhausted; last violated spacing rule " + last_rule);
    };
    for (int k = 0; k < cfg.K; ++k) lay.user_pos.push_back(draw(true));
    for (int j = 0; j < cfg.J; ++j) lay.eve_pos.push_back(draw(false));
    return lay;
}

}  // namespace mris::scenario
