// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "mris/types.hpp"

namespace mris::surface {

// Placement of the sliding layer S2 (N_r x N_c) over the base layer S1 (M_r x M_c).
// Pattern b (0-based here, 1-based in logs) sits at offset (r, c) with b = r * B_c + c.
struct PatternMap {
    int M_r = 0, M_c = 0, N_r = 0, N_c = 0;
    int B_r = 1, B_c = 1, B = 1;
    std::vector<Eigen::MatrixXi> E;  // M x N, one 1 per column
    std::vector<Eigen::VectorXi> e;  // M, ones on uncovered cells

    int M() const { return M_r * M_c; }
    int N() const { return N_r * N_c; }
    // S1 element index covered by S2 element n under pattern b.
    int covered_index(int b, int n) const;
};

// N_r = N_c = 0 builds the single-layer baseline (B = 1, E empty, e = 1).
PatternMap build_pattern_maps(int M_r, int M_c, int N_r, int N_c);

// phi_bar_b = E_b phi + e_b.
CVec equivalent_phase(const PatternMap& map, const CVec& phi, int b);

// u_b = phi_bar_b (.) theta.
CVec combined_reflection(const CVec& phi_bar_b, const CVec& theta);

// Convenience: u_b for the current phases.
CVec reflection(const PatternMap& map, const CVec& theta, const CVec& phi, int b);

}  // namespace mris::surface
