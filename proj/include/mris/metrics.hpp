// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "mris/channel.hpp"
#include "mris/design.hpp"
#include "mris/surface.hpp"
#include "mris/uncertainty.hpp"

namespace mris::metrics {

struct RateResult {
    double sinr = 0;
    double rate = 0;  // nats
};

// Beam-local view: all users' beamformers on pattern b and their assignment flags.
// Interference for user k comes from users i != k with chi_b(i) = 1.
RateResult user_rate(const CVec& h_eff_row, const std::vector<CVec>& W_b, const CVec& f_b,
                     const Eigen::VectorXi& chi_b, int k, double sigma2);

double eve_rate(const CVec& h_eve, const CVec& u_b, const CMat& G, const std::vector<CVec>& W_b, const CVec& f_b,
                const Eigen::VectorXi& chi_b, int k, double sigma2_E);

double beampattern_gain(const CVec& h_eve, const CVec& u_b, const CMat& G, const std::vector<CVec>& W_b,
                        const CVec& f_b, const Eigen::VectorXi& chi_b);

struct RateReport {
    std::vector<int> beam;                      // assigned pattern per user
    std::vector<double> user_sinr, user_rate;   // per user on the assigned pattern
    std::vector<double> eve_rate_nominal;       // per user, max over Eves
    std::vector<double> eve_rate_worst;         // per user, max over Eves and samples
    std::vector<double> secrecy_nominal, secrecy_worst;  // per user, nats, hinged
    std::vector<std::vector<double>> gain;      // [j][b] nominal beampattern gain (W)
    std::vector<double> beam_power;             // W
    double min_secrecy_nominal = 0, min_secrecy_worst = 0;  // nats
    int mc_samples = 0;
};

struct EveModel {
    uncertainty::EveUncertainty unc;
    CVec h_nominal;
};

// Secrecy of every user on its assigned pattern. The worst case is the maximum
// over the nominal channel and mc_samples draws from each Eve's uncertainty box.
RateReport secrecy_report(const Design& d, const channel::ChannelSet& ch, const surface::PatternMap& pm,
                          const std::vector<EveModel>& eves, double sigma2_U, double sigma2_E, int M_r, int M_c,
                          int mc_samples, Rng& rng);

std::string report_json(const RateReport& r);

}  // namespace mris::metrics
