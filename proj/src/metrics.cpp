// SPDX-License-Identifier: Apache-2.0
#include "mris/metrics.hpp"

#include <algorithm>

#include <nlohmann/json.hpp>

namespace mris::metrics {

RateResult user_rate(const CVec& h_eff_row, const std::vector<CVec>& W_b, const CVec& f_b,
                     const Eigen::VectorXi& chi_b, int k, double sigma2) {
    double sig = std::norm(channel::apply_row(h_eff_row, W_b[k]));
    double den = std::norm(channel::apply_row(h_eff_row, f_b)) + sigma2;
    for (int i = 0; i < static_cast<int>(W_b.size()); ++i)
        if (i != k && chi_b(i) == 1) den += std::norm(channel::apply_row(h_eff_row, W_b[i]));
    RateResult r;
    r.sinr = sig / den;
    r.rate = std::log1p(r.sinr);
    return r;
}

double eve_rate(const CVec& h_eve, const CVec& u_b, const CMat& G, const std::vector<CVec>& W_b, const CVec& f_b,
                const Eigen::VectorXi& chi_b, int k, double sigma2_E) {
    CVec row = channel::effective_channel(h_eve, u_b, G);
    return user_rate(row, W_b, f_b, chi_b, k, sigma2_E).rate;
}

double beampattern_gain(const CVec& h_eve, const CVec& u_b, const CMat& G, const std::vector<CVec>& W_b,
                        const CVec& f_b, const Eigen::VectorXi& chi_b) {
    CVec row = channel::effective_channel(h_eve, u_b, G);
    double g = std::norm(channel::apply_row(row, f_b));
    for (int i = 0; i < static_cast<int>(W_b.size()); ++i)
        if (chi_b(i) == 1) g += std::norm(channel::apply_row(row, W_b[i]));
    return g;
}

namespace {

std::vector<CVec> beam_slice(const Design& d, int b) {
    std::vector<CVec> out;
    for (int k = 0; k < d.K(); ++k) out.push_back(d.W[k][b]);
    return out;
}

}  // namespace

RateReport secrecy_report(const Design& d, const channel::ChannelSet& ch, const surface::PatternMap& pm,
                          const std::vector<EveModel>& eves, double sigma2_U, double sigma2_E, int M_r, int M_c,
                          int mc_samples, Rng& rng) {
    const int K = d.K(), B = d.B(), J = static_cast<int>(eves.size());
    RateReport rep;
    rep.mc_samples = mc_samples;
    std::vector<CVec> u(B);
    for (int b = 0; b < B; ++b) u[b] = surface::reflection(pm, d.theta, d.phi, b);

    // Draw the Eve channel samples once so every user is judged against the same set.
    std::vector<std::vector<CVec>> samples(J);
    for (int j = 0; j < J; ++j)
        for (int s = 0; s < mc_samples; ++s)
            samples[j].push_back(uncertainty::sample_uncertain_channel(eves[j].unc, M_r, M_c, rng));

    rep.min_secrecy_nominal = rep.min_secrecy_worst = std::numeric_limits<double>::infinity();
    for (int k = 0; k < K; ++k) {
        int b = d.beam_of(k);
        rep.beam.push_back(b);
        auto W_b = beam_slice(d, b);
        Eigen::VectorXi chi_b = d.chi.col(b);
        CVec row = channel::effective_channel(ch.h_user[k], u[b], ch.G);
        auto ur = user_rate(row, W_b, d.f[b], chi_b, k, sigma2_U);
        double e_nom = 0.0, e_worst = 0.0;
        for (int j = 0; j < J; ++j) {
            double en = eve_rate(eves[j].h_nominal, u[b], ch.G, W_b, d.f[b], chi_b, k, sigma2_E);
            e_nom = std::max(e_nom, en);
            e_worst = std::max(e_worst, en);
            for (const auto& h : samples[j])
                e_worst = std::max(e_worst, eve_rate(h, u[b], ch.G, W_b, d.f[b], chi_b, k, sigma2_E));
        }
        rep.user_sinr.push_back(ur.sinr);
        rep.user_rate.push_back(ur.rate);
        rep.eve_rate_nominal.push_back(e_nom);
        rep.eve_rate_worst.push_back(e_worst);
        rep.secrecy_nominal.push_back(std::max(0.0, ur.rate - e_nom));
        rep.secrecy_worst.push_back(std::max(0.0, ur.rate - e_worst));
        rep.min_secrecy_nominal = std::min(rep.min_secrecy_nominal, rep.secrecy_nominal.back());
        rep.min_secrecy_worst = std::min(rep.min_secrecy_worst, rep.secrecy_worst.back());
    }
    for (int j = 0; j < J; ++j) {
        std::vector<double> g;
        for (int b = 0; b < B; ++b)
            g.push_back(beampattern_gain(eves[j].h_nominal, u[b], ch.G, beam_slice(d, b), d.f[b], d.chi.col(b)));
        rep.gain.push_back(g);
    }
    for (int b = 0; b < B; ++b) {
        double p = d.f[b].squaredNorm();
        for (int k = 0; k < K; ++k)
            if (d.chi(k, b) == 1) p += d.W[k][b].squaredNorm();
        rep.beam_power.push_back(p);
    }
    return rep;
}

std::string report_json(const RateReport& r) {
    nlohmann::json j;
    j["beam"] = r.beam;
    j["user_sinr"] = r.user_sinr;
    j["user_rate_nats"] = r.user_rate;
    j["eve_rate_nominal_nats"] = r.eve_rate_nominal;
    j["eve_rate_worst_nats"] = r.eve_rate_worst;
    j["secrecy_nominal_nats"] = r.secrecy_nominal;
    j["secrecy_worst_nats"] = r.secrecy_worst;
    j["gain_W"] = r.gain;
    j["beam_power_W"] = r.beam_power;
    j["min_secrecy_nominal_bits"] = nats2bits(r.min_secrecy_nominal);
    j["min_secrecy_worst_bits"] = nats2bits(r.min_secrecy_worst);
    j["mc_samples"] = r.mc_samples;
    return j.dump();
}

}  // namespace mris::metrics
