// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "mris/types.hpp"

namespace mris {

// Transmit-side decision variables. W[k][b] exists for every (user, pattern)
// pair; only pairs with chi(k, b) = 1 are transmitted, the rest are kept as
// candidates for the assignment step.
struct Design {
    std::vector<std::vector<CVec>> W;  // [k][b], length L
    std::vector<CVec> f;               // [b], length L
    CVec theta;                        // M, unit modulus
    CVec phi;                          // N, unit modulus (empty for the single-layer baseline)
    Eigen::MatrixXi chi;               // K x B, binary, unit row sums

    int K() const { return static_cast<int>(chi.rows()); }
    int B() const { return static_cast<int>(chi.cols()); }
    int beam_of(int k) const {
        for (int b = 0; b < B(); ++b)
            if (chi(k, b) == 1) return b;
        return -1;
    }
    bool selected(int b) const { return chi.col(b).sum() > 0; }
};

}  // namespace mris
