// SPDX-License-Identifier: Apache-2.0
#include "mris/wmmse.hpp"

#include "mris/channel.hpp"

namespace mris::wmmse {

namespace {

// Total received power of user k: own signal, co-pattern users and AN.
double total_power(const CVec& h, const std::vector<CVec>& W_b, const CVec& f_b, const Eigen::VectorXi& chi_b, int k) {
    double p = std::norm(channel::apply_row(h, f_b));
    for (int i = 0; i < static_cast<int>(W_b.size()); ++i)
        if (i == k || chi_b(i) == 1) p += std::norm(channel::apply_row(h, W_b[i]));
    return p;
}

}  // namespace

cd update_mu(const CVec& h_eff_row, const std::vector<CVec>& W_b, const CVec& f_b, const Eigen::VectorXi& chi_b,
             int k, double sigma2) {
    return channel::apply_row(h_eff_row, W_b[k]) / (total_power(h_eff_row, W_b, f_b, chi_b, k) + sigma2);
}

double update_z(double sinr) {
    if (sinr < 0) throw Error("domain", "update_z: negative SINR");
    return 1.0 + sinr;
}

double mse(cd mu, const CVec& h_eff_row, const std::vector<CVec>& W_b, const CVec& f_b, const Eigen::VectorXi& chi_b,
           int k, double sigma2) {
    cd s = channel::apply_row(h_eff_row, W_b[k]);
    double T = total_power(h_eff_row, W_b, f_b, chi_b, k) + sigma2;
    return std::norm(mu) * T - 2.0 * std::real(std::conj(mu) * s) + 1.0;
}

double surrogate_rate(double z, cd mu, const CVec& h_eff_row, const std::vector<CVec>& W_b, const CVec& f_b,
                      const Eigen::VectorXi& chi_b, int k, double sigma2) {
    if (!(z > 0)) throw Error("domain", "surrogate_rate: z must be positive");
    cd s = channel::apply_row(h_eff_row, W_b[k]);
    double zt = std::log(z) - z - z * std::norm(mu) * sigma2 + 1.0;
    return 2.0 * z * std::real(std::conj(mu) * s) + zt -
           z * std::norm(mu) * total_power(h_eff_row, W_b, f_b, chi_b, k);
}

}  // namespace mris::wmmse
