// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "mris/types.hpp"

namespace mris::wmmse {

// Auxiliaries of the weighted MMSE surrogate, stored in solver-normalized units.
struct AuxiliaryState {
    RMat z;                          // K x B, > 0
    CMat mu;                         // K x B
    double t = 0;
    RMat v;                          // K x B
    std::vector<RMat> v_bar;         // [j] K x B, >= 0
    std::vector<double> lambdas;     // multipliers of the last solve, >= 0
};

// Receive filter minimizing the MSE of user k on pattern b. The denominator is
// the total received power including user k itself, plus noise.
cd update_mu(const CVec& h_eff_row, const std::vector<CVec>& W_b, const CVec& f_b, const Eigen::VectorXi& chi_b,
             int k, double sigma2);

double update_z(double sinr);

// Mean squared error of user k for receive filter mu.
double mse(cd mu, const CVec& h_eff_row, const std::vector<CVec>& W_b, const CVec& f_b, const Eigen::VectorXi& chi_b,
           int k, double sigma2);

// y = 2 z Re{mu* h^T w_k} + ln z - z - z|mu|^2 sigma^2 + 1 - z|mu|^2 (sum_i |h^T w_i|^2 + |h^T f|^2),
// where the sum runs over k and every other user assigned to the pattern.
double surrogate_rate(double z, cd mu, const CVec& h_eff_row, const std::vector<CVec>& W_b, const CVec& f_b,
                      const Eigen::VectorXi& chi_b, int k, double sigma2);

}  // namespace mris::wmmse
