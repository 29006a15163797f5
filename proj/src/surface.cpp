// SPDX-License-Identifier: Apache-2.0
#include "mris/surface.hpp"

namespace mris::surface {

int PatternMap::covered_index(int b, int n) const {
    int r = b / B_c, c = b % B_c;
    int nr = n / N_c, nc = n % N_c;
    return (r + nr) * M_c + (c + nc);
}

PatternMap build_pattern_maps(int M_r, int M_c, int N_r, int N_c) {
    PatternMap pm;
    pm.M_r = M_r;
    pm.M_c = M_c;
    pm.N_r = N_r;
    pm.N_c = N_c;
    if (M_r < 1 || M_c < 1) throw Error("dimension", "S1 grid must be at least 1x1");
    const int M = M_r * M_c;
    if (N_r == 0 && N_c == 0) {
        pm.E.push_back(Eigen::MatrixXi::Zero(M, 0));
        pm.e.push_back(Eigen::VectorXi::Ones(M));
        return pm;
    }
    if (N_r < 1 || N_c < 1 || N_r > M_r || N_c > M_c)
        throw Error("dimension", "S2 grid must satisfy 1 <= N_r <= M_r and 1 <= N_c <= M_c");
    pm.B_r = M_r - N_r + 1;
    pm.B_c = M_c - N_c + 1;
    pm.B = pm.B_r * pm.B_c;
    const int N = N_r * N_c;
    for (int b = 0; b < pm.B; ++b) {
        Eigen::MatrixXi E = Eigen::MatrixXi::Zero(M, N);
        Eigen::VectorXi e = Eigen::VectorXi::Ones(M);
        for (int n = 0; n < N; ++n) {
            int m = pm.covered_index(b, n);
            E(m, n) = 1;
            e(m) = 0;
        }
        pm.E.push_back(E);
        pm.e.push_back(e);
    }
    return pm;
}

CVec equivalent_phase(const PatternMap& map, const CVec& phi, int b) {
    if (b < 0 || b >= map.B) throw Error("index", "pattern index out of range");
    if (phi.size() != map.N()) throw Error("dimension", "phi length differs from N");
    CVec out = map.e[b].cast<cd>();
    if (map.N() > 0) out += map.E[b].cast<cd>() * phi;
    return out;
}

CVec combined_reflection(const CVec& phi_bar_b, const CVec& theta) {
    if (phi_bar_b.size() != theta.size()) throw Error("dimension", "combined_reflection length mismatch");
    return phi_bar_b.cwiseProduct(theta);
}

CVec reflection(const PatternMap& map, const CVec& theta, const CVec& phi, int b) {
    return combined_reflection(equivalent_phase(map, phi, b), theta);
}

}  // namespace mris::surface
