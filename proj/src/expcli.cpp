// SPDX-License-Identifier: Apache-2.0
#include "mris/expcli.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "mris/conic.hpp"
#include "mris/metrics.hpp"

namespace mris::expcli {

using nlohmann::json;

namespace {

std::string hash_without_seed(scenario::SystemConfig cfg) {
    cfg.seed = 0;
    return scenario::config_hash(cfg);
}

std::vector<double> args_of(const CVec& v) {
    std::vector<double> a;
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(std::arg(v(i)));
    return a;
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(10);
    os << v;
    return os.str();
}

}  // namespace

RunOutput run(const scenario::SystemConfig& base, unsigned long seed, int mc_samples, std::ostream* jsonl) {
    auto t0 = std::chrono::steady_clock::now();
    scenario::SystemConfig cfg = base;
    cfg.seed = seed;
    cfg.mc_samples = mc_samples;
    Rng rng(seed);
    RunOutput out;
    out.scenario = orchestrator::build_scenario(cfg, rng);
    auto& sc = out.scenario;
    out.state = orchestrator::initialize_solution(sc, rng);
    orchestrator::AoOptions opt;
    opt.mc_samples = std::min(mc_samples, 100);
    opt.mc_seed = seed + 1;
    opt.jsonl = jsonl;
    out.state = orchestrator::run_ao(out.state, sc, opt);
    const auto& st = out.state;

    Rng mc(seed ^ 0x9e3779b97f4a7c15ULL);
    auto rep = orchestrator::report(st, sc, mc_samples, mc);

    ResultRecord& r = out.record;
    r.config_hash = hash_without_seed(cfg);
    r.seed = seed;
    r.engine = conic::engine_name();
    r.K = cfg.K;
    r.J = cfg.J;
    r.M_r = cfg.M_r;
    r.M_c = cfg.M_c;
    r.N_r = cfg.N_r;
    r.N_c = cfg.N_c;
    r.B = sc.pm.B;
    r.min_secrecy_nominal_bits = nats2bits(rep.min_secrecy_nominal);
    r.min_secrecy_worst_bits = nats2bits(rep.min_secrecy_worst);
    for (double s : rep.secrecy_nominal) r.secrecy_nominal_bits.push_back(nats2bits(s));
    for (double s : rep.secrecy_worst) r.secrecy_worst_bits.push_back(nats2bits(s));
    r.beam = rep.beam;
    r.gain = rep.gain;
    r.t_trace.push_back(st.t_initial);
    for (const auto& it : st.log) {
        r.t_trace.push_back(it.t);
        double s = 0;
        for (const auto& b : it.blocks) s += b.seconds;
        r.iteration_seconds.push_back(s);
    }
    r.iterations = st.iterations;
    r.mc_samples = mc_samples;
    r.converged = st.converged;
    r.degraded = st.degraded;
    r.offsets_active = st.off.any();
    r.theta_arg = args_of(st.design.theta);
    r.phi_arg = args_of(st.design.phi);
    for (int k = 0; k < st.design.K(); ++k) {
        std::vector<int> row;
        for (int b = 0; b < st.design.B(); ++b) row.push_back(st.design.chi(k, b));
        r.chi.push_back(row);
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return out;
}

std::string record_json(const ResultRecord& r) {
    json j;
    j["config_hash"] = r.config_hash;
    j["seed"] = r.seed;
    j["engine"] = r.engine;
    j["label"] = r.label;
    j["K"] = r.K;
    j["J"] = r.J;
    j["M"] = {r.M_r, r.M_c};
    j["N"] = {r.N_r, r.N_c};
    j["B"] = r.B;
    j["min_secrecy_nominal_bits"] = r.min_secrecy_nominal_bits;
    j["min_secrecy_worst_bits"] = r.min_secrecy_worst_bits;
    j["secrecy_nominal_bits"] = r.secrecy_nominal_bits;
    j["secrecy_worst_bits"] = r.secrecy_worst_bits;
    j["beam"] = r.beam;
    j["t_trace"] = r.t_trace;
    j["gain_W"] = r.gain;
    j["iteration_seconds"] = r.iteration_seconds;
    j["seconds"] = r.seconds;
    j["iterations"] = r.iterations;
    j["mc_samples"] = r.mc_samples;
    j["converged"] = r.converged;
    j["degraded"] = r.degraded;
    j["offsets_active"] = r.offsets_active;
    j["theta_arg"] = r.theta_arg;
    j["phi_arg"] = r.phi_arg;
    j["chi"] = r.chi;
    return j.dump();
}

std::string csv_header() {
    return "config_hash,seed,engine,label,K,J,M_r,M_c,N_r,N_c,B,min_secrecy_nominal_bits,min_secrecy_worst_bits,"
           "t_final,iterations,converged,degraded,offsets_active,seconds";
}

std::string csv_row(const ResultRecord& r) {
    std::string label = r.label;
    std::replace(label.begin(), label.end(), ',', ' ');
    std::ostringstream os;
    os << r.config_hash << ',' << r.seed << ',' << r.engine << ',' << label << ',' << r.K << ',' << r.J << ','
       << r.M_r << ',' << r.M_c << ',' << r.N_r << ',' << r.N_c << ',' << r.B << ',' << fmt(r.min_secrecy_nominal_bits)
       << ',' << fmt(r.min_secrecy_worst_bits) << ',' << fmt(r.t_trace.empty() ? 0.0 : r.t_trace.back()) << ','
       << r.iterations << ',' << r.converged << ',' << r.degraded << ',' << r.offsets_active << ',' << fmt(r.seconds);
    return os.str();
}

void persist(const ResultRecord& r, const std::string& out_dir) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    {
        std::ofstream f(fs::path(out_dir) / ("run_" + r.config_hash + "_" + std::to_string(r.seed) + ".json"));
        f << record_json(r) << '\n';
    }
    fs::path csv = fs::path(out_dir) / "runs.csv";
    bool fresh = !fs::exists(csv);
    std::ofstream f(csv, std::ios::app);
    if (fresh) f << csv_header() << '\n';
    f << csv_row(r) << '\n';
}

// ---- sweeps

std::vector<SweepCell> grid_cells(const std::vector<std::string>& axes) {
    std::vector<SweepCell> cells{SweepCell{}};
    for (const auto& axis : axes) {
        auto eq = axis.find('=');
        if (eq == std::string::npos) throw Error("config", "grid axis needs key=v1,v2,...: " + axis);
        std::string key = axis.substr(0, eq);
        std::vector<std::string> values;
        std::stringstream ss(axis.substr(eq + 1));
        for (std::string v; std::getline(ss, v, ',');)
            if (!v.empty()) values.push_back(v);
        if (values.empty()) throw Error("config", "grid axis has no values: " + axis);
        std::vector<SweepCell> next;
        for (const auto& c : cells)
            for (const auto& v : values) {
                SweepCell n = c;
                n.overrides.push_back(key + "=" + v);
                n.label += (n.label.empty() ? "" : ";") + key + "=" + v;
                next.push_back(n);
            }
        cells = std::move(next);
    }
    return cells;
}

namespace {

SweepCell shape_cell(int mr, int mc, int nr, int nc) {
    SweepCell c;
    c.overrides = {"system.M_r=" + std::to_string(mr), "system.M_c=" + std::to_string(mc),
                   "system.N_r=" + std::to_string(nr), "system.N_c=" + std::to_string(nc)};
    c.label = "M=" + std::to_string(mr) + "x" + std::to_string(mc) + ";N=" + std::to_string(nr) + "x" +
              std::to_string(nc);
    return c;
}

}  // namespace

std::vector<SweepCell> preset_cells(const std::string& name) {
    // S1 loses one row (or column) of six elements per step; S2 takes them.
    if (name == "case-1-1") return {shape_cell(6, 6, 0, 0), shape_cell(5, 6, 2, 3), shape_cell(4, 6, 3, 4),
                                    shape_cell(3, 6, 3, 6)};
    if (name == "case-1-2") return {shape_cell(6, 6, 0, 0), shape_cell(6, 5, 3, 2), shape_cell(6, 4, 4, 3),
                                    shape_cell(6, 3, 6, 3)};
    if (name == "case-2-1") return {shape_cell(6, 6, 0, 0), shape_cell(5, 6, 1, 6), shape_cell(4, 6, 2, 6),
                                    shape_cell(3, 6, 3, 6)};
    if (name == "case-2-2") return {shape_cell(6, 6, 0, 0), shape_cell(6, 5, 6, 1), shape_cell(6, 4, 6, 2),
                                    shape_cell(6, 3, 6, 3)};
    if (name == "trend-5x5") return {shape_cell(5, 5, 0, 0), shape_cell(5, 5, 1, 1), shape_cell(5, 5, 2, 2),
                                     shape_cell(5, 5, 3, 3)};
    throw Error("config", "unknown sweep preset: " + name);
}

double median(std::vector<double> v) {
    if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
    std::sort(v.begin(), v.end());
    std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

SweepResult sweep(const scenario::SystemConfig& base, const std::vector<SweepCell>& cells,
                  const std::vector<unsigned long>& seeds, int mc_samples, int jobs) {
    if (seeds.empty()) throw Error("config", "sweep needs at least one seed");
    std::vector<scenario::SystemConfig> cfgs;
    for (const auto& c : cells) {
        scenario::SystemConfig cfg = base;
        for (const auto& o : c.overrides) scenario::apply_override(cfg, o);
        scenario::validate(cfg);
        cfgs.push_back(cfg);
    }
    const std::size_t total = cells.size() * seeds.size();
    SweepResult res;
    res.rows.resize(total);
    std::atomic<std::size_t> next{0};
    std::mutex err_mu;
    std::string first_error;
    auto worker = [&] {
        for (std::size_t i = next++; i < total; i = next++) {
            std::size_t c = i / seeds.size(), s = i % seeds.size();
            try {
                ResultRecord r = run(cfgs[c], seeds[s], mc_samples).record;
                r.label = cells[c].label;
                res.rows[i] = std::move(r);
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lk(err_mu);
                if (first_error.empty()) first_error = e.what();
            }
        }
    };
    const int nthreads = std::max(1, std::min<int>(jobs, static_cast<int>(total)));
    if (nthreads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    if (!first_error.empty()) throw Error("sweep", first_error);
    for (std::size_t c = 0; c < cells.size(); ++c) {
        CellSummary cs;
        cs.label = cells[c].label;
        std::vector<double> nom, worst;
        for (std::size_t s = 0; s < seeds.size(); ++s) {
            nom.push_back(res.rows[c * seeds.size() + s].min_secrecy_nominal_bits);
            worst.push_back(res.rows[c * seeds.size() + s].min_secrecy_worst_bits);
        }
        cs.runs = static_cast<int>(nom.size());
        cs.median_nominal_bits = median(nom);
        cs.median_worst_bits = median(worst);
        cs.mean_nominal_bits = std::accumulate(nom.begin(), nom.end(), 0.0) / cs.runs;
        cs.mean_worst_bits = std::accumulate(worst.begin(), worst.end(), 0.0) / cs.runs;
        res.cells.push_back(cs);
    }
    return res;
}

std::string summary_csv(const std::vector<CellSummary>& cells) {
    std::ostringstream os;
    os << "label,runs,median_nominal_bits,mean_nominal_bits,median_worst_bits,mean_worst_bits\n";
    for (const auto& c : cells) {
        std::string label = c.label;
        std::replace(label.begin(), label.end(), ',', ' ');
        os << label << ',' << c.runs << ',' << fmt(c.median_nominal_bits) << ',' << fmt(c.mean_nominal_bits) << ','
           << fmt(c.median_worst_bits) << ',' << fmt(c.mean_worst_bits) << '\n';
    }
    return os.str();
}

// ---- uncertainty bound validation

std::vector<BoundsCell> validate_bounds(const BoundsSpec& spec) {
    if (spec.n_D < 2 || spec.n_angle < 2) throw Error("config", "bounds grid needs at least 2x2 cells");
    uncertainty::EveUncertainty base;
    base.d_bar = spec.d_bar;
    base.theta_bar = spec.theta_bar;
    base.phi_bar = spec.phi_bar;
    base.eps_nlos = {spec.eps_nlos};
    base.kappa = spec.kappa;
    base.beta0 = spec.beta0;
    base.d_R = spec.d_R;
    base.lambda_c = spec.lambda_c;
    // corners first, then cells along both diagonals
    std::vector<std::pair<int, int>> spots = {
        {0, 0}, {spec.n_D - 1, spec.n_angle - 1}, {spec.n_D - 1, 0}, {0, spec.n_angle - 1}};
    for (int s = 1; static_cast<int>(spots.size()) < spec.spot_cells && s < std::max(spec.n_D, spec.n_angle); ++s) {
        int iD = std::min(s, spec.n_D - 1), iA = std::min(s, spec.n_angle - 1);
        for (auto c : {std::pair{iD, iA}, std::pair{iD, spec.n_angle - 1 - iA}})
            if (static_cast<int>(spots.size()) < spec.spot_cells &&
                std::find(spots.begin(), spots.end(), c) == spots.end())
                spots.push_back(c);
    }
    std::vector<BoundsCell> out;
    for (int iD = 0; iD < spec.n_D; ++iD)
        for (int iA = 0; iA < spec.n_angle; ++iA) {
            BoundsCell c;
            c.iD = iD;
            c.iA = iA;
            c.D = spec.D_max * iD / (spec.n_D - 1);
            c.Theta = c.Psi = spec.angle_max * iA / (spec.n_angle - 1);
            auto u = base;
            u.D = c.D;
            u.Theta = c.Theta;
            u.Psi = c.Psi;
            auto geom = uncertainty::bound_geometry(u, spec.M_r, spec.M_c, spec.dpsi_grid);
            auto tm = uncertainty::tightness_metrics(geom);
            auto rc = uncertainty::robust_channel(u, geom, spec.M_r, spec.M_c);
            c.eta = tm.eta;
            c.eps = tm.eps_norm;
            c.eps_sphere = rc.eps_sphere;
            if (std::find(spots.begin(), spots.end(), std::pair{iD, iA}) != spots.end()) {
                Rng rng(spec.seed * 1000003ULL + static_cast<unsigned long>(iD * spec.n_angle + iA));
                c.samples = spec.samples;
                for (long s = 0; s < spec.samples; ++s) {
                    CVec h = uncertainty::sample_uncertain_channel(u, spec.M_r, spec.M_c, rng);
                    double e = (h - rc.h_nominal).norm();
                    c.worst_ratio = std::max(c.worst_ratio, e / rc.eps_sphere);
                    if (e > rc.eps_sphere * (1.0 + 1e-12)) ++c.violations;
                }
            }
            out.push_back(c);
        }
    return out;
}

std::string bounds_csv(const std::vector<BoundsCell>& cells) {
    std::ostringstream os;
    os << "iD,iA,D_m,Theta_deg,Psi_deg,eta,eps,eps_sphere,samples,violations,worst_ratio\n";
    for (const auto& c : cells)
        os << c.iD << ',' << c.iA << ',' << fmt(c.D) << ',' << fmt(rad2deg(c.Theta)) << ',' << fmt(rad2deg(c.Psi))
           << ',' << fmt(c.eta) << ',' << fmt(c.eps) << ',' << fmt(c.eps_sphere) << ',' << c.samples << ','
           << c.violations << ',' << fmt(c.worst_ratio) << '\n';
    return os.str();
}

// ---- beam-gain maps

std::vector<MapPoint> beampattern_map(const orchestrator::SolutionState& st, const orchestrator::ScenarioData& sc,
                                      const MapSpec& spec) {
    const auto& cfg = sc.cfg;
    Design d = solvers::to_physical_units(st.design, cfg.P_max);
    const int K = d.K(), B = d.B();
    std::vector<MapPoint> out;
    for (int ie = 0; ie < spec.n_el; ++ie)
        for (int ia = 0; ia < spec.n_az; ++ia) {
            MapPoint p;
            p.az = spec.n_az > 1 ? spec.az_min + (spec.az_max - spec.az_min) * ia / (spec.n_az - 1) : spec.az_min;
            p.el = spec.n_el > 1 ? spec.el_min + (spec.el_max - spec.el_min) * ie / (spec.n_el - 1) : spec.el_min;
            CVec h = std::sqrt(cfg.beta0) / spec.range *
                     channel::steer_mris(deg2rad(p.az), deg2rad(p.el), cfg.M_r, cfg.M_c, cfg.d_R, cfg.lambda_c);
            for (int b = 0; b < B; ++b) {
                if (!d.selected(b)) continue;
                CVec u = surface::reflection(sc.pm, d.theta, d.phi, b);
                std::vector<CVec> Wb;
                for (int k = 0; k < K; ++k) Wb.push_back(d.W[k][b]);
                Eigen::VectorXi chi_b = d.chi.col(b);
                Eigen::VectorXi none = Eigen::VectorXi::Zero(K);
                CVec f0 = CVec::Zero(d.f[b].size());
                p.comm += metrics::beampattern_gain(h, u, sc.channels.G, Wb, f0, chi_b);
                p.an += metrics::beampattern_gain(h, u, sc.channels.G, Wb, d.f[b], none);
                p.total += metrics::beampattern_gain(h, u, sc.channels.G, Wb, d.f[b], chi_b);
            }
            out.push_back(p);
        }
    return out;
}

std::string map_csv(const std::vector<MapPoint>& pts) {
    std::ostringstream os;
    os << "az_deg,el_deg,comm_W,an_W,total_W\n";
    for (const auto& p : pts)
        os << fmt(p.az) << ',' << fmt(p.el) << ',' << fmt(p.comm) << ',' << fmt(p.an) << ',' << fmt(p.total) << '\n';
    return os.str();
}

void render_heatmap(const std::string& csv_path, const std::string& x_col, const std::string& y_col,
                    const std::string& value_col, bool log_scale, const std::string& ppm_path) {
    std::ifstream in(csv_path);
    if (!in) throw Error("io", "cannot read " + csv_path);
    std::string line;
    std::getline(in, line);
    std::vector<std::string> head;
    {
        std::stringstream ss(line);
        for (std::string c; std::getline(ss, c, ',');) head.push_back(c);
    }
    auto col = [&](const std::string& name) {
        auto it = std::find(head.begin(), head.end(), name);
        if (it == head.end()) throw Error("io", "column " + name + " not in " + csv_path);
        return static_cast<std::size_t>(it - head.begin());
    };
    const std::size_t cx = col(x_col), cy = col(y_col), cv = col(value_col);
    std::map<std::pair<double, double>, double> cells;
    std::vector<double> xs, ys;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> f;
        std::stringstream ss(line);
        for (std::string c; std::getline(ss, c, ',');) f.push_back(c);
        double x = std::stod(f.at(cx)), y = std::stod(f.at(cy)), v = std::stod(f.at(cv));
        if (log_scale) v = std::log10(std::max(v, 1e-300));
        cells[{x, y}] = v;
        xs.push_back(x);
        ys.push_back(y);
    }
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    std::sort(ys.begin(), ys.end());
    ys.erase(std::unique(ys.begin(), ys.end()), ys.end());
    if (cells.empty()) throw Error("io", "no rows in " + csv_path);
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (const auto& [k, v] : cells) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    if (log_scale) lo = std::max(lo, hi - 6.0);  // six decades of dynamic range
    std::ofstream out(ppm_path, std::ios::binary);
    out << "P6\n" << xs.size() << ' ' << ys.size() << "\n255\n";
    for (auto yi = ys.rbegin(); yi != ys.rend(); ++yi)
        for (double x : xs) {
            auto it = cells.find({x, *yi});
            double a = it == cells.end() || hi <= lo ? 0.0 : std::clamp((it->second - lo) / (hi - lo), 0.0, 1.0);
            // black -> red -> yellow -> white
            auto ch = [&](double off) { return static_cast<unsigned char>(255.0 * std::clamp(3.0 * a - off, 0.0, 1.0)); };
            out.put(static_cast<char>(ch(0.0)));
            out.put(static_cast<char>(ch(1.0)));
            out.put(static_cast<char>(ch(2.0)));
        }
}

// ---- assignment oracle

namespace {

double candidate_t(const solvers::Instance& I, Design d, solvers::Offsets off, const solvers::Offsets& ref,
                   bool* feasible) {
    solvers::solve_beamformer(I, d, off);
    auto ev = solvers::evaluate(I, d, ref);
    *feasible = ev.feasible;
    return ev.t;
}

std::vector<std::vector<int>> chi_rows(const Eigen::MatrixXi& chi) {
    std::vector<std::vector<int>> r;
    for (Eigen::Index k = 0; k < chi.rows(); ++k) {
        std::vector<int> row;
        for (Eigen::Index b = 0; b < chi.cols(); ++b) row.push_back(chi(k, b));
        r.push_back(row);
    }
    return r;
}

}  // namespace

OracleReport oracle_assignment(const scenario::SystemConfig& base, unsigned long seed, int warmup_iterations) {
    scenario::SystemConfig cfg = base;
    cfg.seed = seed;
    Rng rng(seed);
    auto sc = orchestrator::build_scenario(cfg, rng);
    auto st = orchestrator::initialize_solution(sc, rng);
    if (warmup_iterations > 0) {
        orchestrator::AoOptions opt;
        opt.mc_samples = -1;
        opt.max_iter = warmup_iterations;
        st = orchestrator::run_ao(st, sc, opt);
    }
    const auto& I = sc.inst;
    const int K = I.K, B = I.B;
    if (K > 3 || B > 3) throw Error("config", "oracle enumeration is limited to K <= 3 and B <= 3");
    Design dc = st.design;
    solvers::refresh_candidates(I, dc, I.candidate_rounds);
    const solvers::Offsets ref = st.off;

    OracleReport rep;
    rep.seed = seed;
    {
        Design d = dc;
        solvers::Offsets off = ref;
        solvers::solve_assignment(I, d, off);
        rep.chi_solver = chi_rows(d.chi);
        bool feas = false;
        rep.t_solver = candidate_t(I, d, ref, ref, &feas);
        if (!feas) rep.t_solver = -std::numeric_limits<double>::infinity();
    }
    rep.t_best = -std::numeric_limits<double>::infinity();
    int total = 1;
    for (int k = 0; k < K; ++k) total *= B;
    for (int code = 0; code < total; ++code) {
        Design d = dc;
        d.chi.setZero();
        for (int k = 0, c = code; k < K; ++k, c /= B) d.chi(k, c % B) = 1;
        ++rep.candidates;
        bool feas = false;
        double t = candidate_t(I, d, ref, ref, &feas);
        if (!feas) continue;
        ++rep.feasible_candidates;
        if (t > rep.t_best) {
            rep.t_best = t;
            rep.chi_best = chi_rows(d.chi);
        }
    }
    rep.gap = rep.t_best - rep.t_solver;
    rep.match = rep.chi_solver == rep.chi_best || rep.gap <= 1e-6 * std::max(1.0, std::abs(rep.t_best));
    return rep;
}

std::string oracle_json(const OracleReport& r) {
    json j;
    j["seed"] = r.seed;
    j["chi_solver"] = r.chi_solver;
    j["chi_best"] = r.chi_best;
    j["t_solver"] = std::isfinite(r.t_solver) ? json(r.t_solver) : json(nullptr);
    j["t_best"] = std::isfinite(r.t_best) ? json(r.t_best) : json(nullptr);
    j["gap"] = std::isfinite(r.gap) ? json(r.gap) : json(nullptr);
    j["match"] = r.match;
    j["candidates"] = r.candidates;
    j["feasible_candidates"] = r.feasible_candidates;
    return j.dump();
}

std::vector<unsigned long> parse_seeds(const std::string& text) {
    std::vector<unsigned long> out;
    std::stringstream ss(text);
    for (std::string part; std::getline(ss, part, ',');) {
        if (part.empty()) continue;
        auto dash = part.find('-');
        if (dash == std::string::npos) {
            out.push_back(std::stoul(part));
        } else {
            unsigned long a = std::stoul(part.substr(0, dash)), b = std::stoul(part.substr(dash + 1));
            if (b < a) throw Error("config", "bad seed range " + part);
            for (unsigned long s = a; s <= b; ++s) out.push_back(s);
        }
    }
    if (out.empty()) throw Error("config", "empty seed list");
    return out;
}

}  // namespace mris::expcli
