// SPDX-License-Identifier: Apache-2.0
#include "mris/channel.hpp"

#include <algorithm>

#include <nlohmann/json.hpp>

namespace mris::channel {

using nlohmann::json;

CVec steer_bs(double theta_t, int L, double d_B, double lambda_c) {
    CVec a(L);
    double k = 2.0 * kPi * d_B / lambda_c * std::sin(theta_t);
    for (int l = 0; l < L; ++l) a(l) = std::polar(1.0, k * l);
    return a;
}

SpatialFreq spatial_freq(double azimuth, double elevation, double d_R, double lambda_c) {
    double s = d_R / lambda_c * std::sin(elevation);
    return {s * std::cos(azimuth), s * std::sin(azimuth)};
}

CVec steer_mris(double azimuth, double elevation, int M_r, int M_c, double d_R, double lambda_c) {
    SpatialFreq f = spatial_freq(azimuth, elevation, d_R, lambda_c);
    CVec row(M_r), col(M_c);
    for (int r = 0; r < M_r; ++r) row(r) = std::polar(1.0, 2.0 * kPi * f.dr * r);
    for (int c = 0; c < M_c; ++c) col(c) = std::polar(1.0, 2.0 * kPi * f.dc * c);
    CVec a(M_r * M_c);
    for (int r = 0; r < M_r; ++r)
        for (int c = 0; c < M_c; ++c) a(r * M_c + c) = row(r) * col(c);
    return a;
}

double bs_departure_angle(const scenario::NodeLayout& layout) {
    Point3 r = layout.mris_pos - layout.bs_pos;
    double d = r.norm();
    if (!(d > 0.0)) throw Error("geometry", "BS and MRIS coincide");
    return std::asin(std::clamp(r.z() / d, -1.0, 1.0));
}

namespace {

CMat cn_matrix(int rows, int cols, Rng& rng) {
    std::normal_distribution<double> n(0.0, std::sqrt(0.5));
    CMat X(rows, cols);
    for (int j = 0; j < cols; ++j)
        for (int i = 0; i < rows; ++i) {
            double re = n(rng);
            double im = n(rng);
            X(i, j) = cd(re, im);
        }
    return X;
}

double los_weight(double kappa) {
    // kappa is stored linearly; a huge value models a pure LoS link.
    return std::sqrt(kappa / (1.0 + kappa));
}
double nlos_weight(double kappa) { return std::sqrt(1.0 / (1.0 + kappa)); }

}  // namespace

ChannelSet synthesize_channels(const scenario::SystemConfig& cfg, const scenario::NodeLayout& layout, Rng& rng) {
    ChannelSet ch;
    ch.kappa_BR = cfg.kappa_BR;
    ch.kappa_RU = cfg.kappa_RU;
    ch.kappa_RE = cfg.kappa_RE;
    const int M = cfg.M();
    ch.theta_t = bs_departure_angle(layout);
    ch.d_BR = (layout.mris_pos - layout.bs_pos).norm();
    auto bs_view = scenario::polar_from_mris(layout, layout.bs_pos);
    CVec a_ms = steer_mris(bs_view.azimuth, bs_view.elevation, cfg.M_r, cfg.M_c, cfg.d_R, cfg.lambda_c);
    CVec a_bs = steer_bs(ch.theta_t, cfg.L, cfg.d_B, cfg.lambda_c);
    CMat G_los = a_ms * a_bs.adjoint();
    CMat G_nlos = cn_matrix(M, cfg.L, rng);
    ch.G = std::sqrt(cfg.beta0) / ch.d_BR *
           (los_weight(cfg.kappa_BR) * G_los + nlos_weight(cfg.kappa_BR) * G_nlos);
    for (const auto& p : layout.user_pos) {
        auto pv = scenario::polar_from_mris(layout, p);
        CVec a = steer_mris(pv.azimuth, pv.elevation, cfg.M_r, cfg.M_c, cfg.d_R, cfg.lambda_c);
        CVec g = cn_matrix(M, 1, rng).col(0);
        ch.h_user.push_back(std::sqrt(cfg.beta0) / pv.d *
                            (los_weight(cfg.kappa_RU) * a + nlos_weight(cfg.kappa_RU) * g));
    }
    return ch;
}

CVec effective_channel(const CVec& h_rx, const CVec& u_b, const CMat& G) {
    if (h_rx.size() != G.rows() || u_b.size() != G.rows())
        throw Error("dimension", "effective_channel: h, u and G disagree on M");
    CVec s = u_b.cwiseProduct(h_rx.conjugate());
    return G.transpose() * s;
}

namespace {

json cvec_json(const CVec& v) {
    json a = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back({v(i).real(), v(i).imag()});
    return a;
}

CVec cvec_from(const json& a) {
    CVec v(static_cast<Eigen::Index>(a.size()));
    for (std::size_t i = 0; i < a.size(); ++i) v(static_cast<Eigen::Index>(i)) = cd(a[i][0], a[i][1]);
    return v;
}

}  // namespace

std::string dump_channels(const ChannelSet& ch) {
    json j;
    j["rows"] = ch.G.rows();
    j["cols"] = ch.G.cols();
    json g = json::array();
    for (Eigen::Index r = 0; r < ch.G.rows(); ++r)
        for (Eigen::Index c = 0; c < ch.G.cols(); ++c) g.push_back({ch.G(r, c).real(), ch.G(r, c).imag()});
    j["G"] = g;
    j["h_user"] = json::array();
    for (const auto& h : ch.h_user) j["h_user"].push_back(cvec_json(h));
    j["h_eve_nominal"] = json::array();
    for (const auto& h : ch.h_eve_nominal) j["h_eve_nominal"].push_back(cvec_json(h));
    j["eps_eve"] = ch.eps_eve;
    j["kappa"] = {ch.kappa_BR, ch.kappa_RU, ch.kappa_RE};
    j["theta_t"] = ch.theta_t;
    j["d_BR"] = ch.d_BR;
    return j.dump(1);
}

ChannelSet load_channels(const std::string& text) {
    json j = json::parse(text);
    ChannelSet ch;
    Eigen::Index rows = j["rows"], cols = j["cols"];
    ch.G.resize(rows, cols);
    const json& g = j["G"];
    for (Eigen::Index r = 0; r < rows; ++r)
        for (Eigen::Index c = 0; c < cols; ++c) {
            const json& e = g[static_cast<std::size_t>(r * cols + c)];
            ch.G(r, c) = cd(e[0], e[1]);
        }
    for (const auto& h : j["h_user"]) ch.h_user.push_back(cvec_from(h));
    for (const auto& h : j["h_eve_nominal"]) ch.h_eve_nominal.push_back(cvec_from(h));
    ch.eps_eve = j["eps_eve"].get<std::vector<double>>();
    ch.kappa_BR = j["kappa"][0];
    ch.kappa_RU = j["kappa"][1];
    ch.kappa_RE = j["kappa"][2];
    ch.theta_t = j["theta_t"];
    ch.d_BR = j["d_BR"];
    return ch;
}

}  // namespace mris::channel
