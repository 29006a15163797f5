// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "mris/surface.hpp"

using namespace mris;
using namespace mris::surface;

namespace {

CVec random_phases(int n, Rng& rng) {
    std::uniform_real_distribution<double> u(0, 2 * kPi);
    CVec v(n);
    for (int i = 0; i < n; ++i) v(i) = std::polar(1.0, u(rng));
    return v;
}

}  // namespace

TEST_CASE("two by two base with a one by two layer has two patterns") {
    auto pm = build_pattern_maps(2, 2, 1, 2);
    CHECK(pm.B == 2);
    CHECK(pm.B_r == 2);
    CHECK(pm.B_c == 1);
}

TEST_CASE("full overlap gives one pattern with an identity map") {
    auto pm = build_pattern_maps(3, 2, 3, 2);
    REQUIRE(pm.B == 1);
    CHECK(pm.E[0] == Eigen::MatrixXi::Identity(6, 6));
    CHECK(pm.e[0].sum() == 0);
}

TEST_CASE("three by three base with a two by two layer") {
    auto pm = build_pattern_maps(3, 3, 2, 2);
    REQUIRE(pm.B == 4);
    for (int b = 0; b < 4; ++b) {
        CHECK(pm.E[b].sum() == 4);
        CHECK(pm.e[b].sum() == 5);
    }
}

TEST_CASE("map invariants and placement enumeration for every grid up to 6x6") {
    for (int Mr = 1; Mr <= 6; ++Mr)
        for (int Mc = 1; Mc <= 6; ++Mc)
            for (int Nr = 1; Nr <= Mr; ++Nr)
                for (int Nc = 1; Nc <= Mc; ++Nc) {
                    auto pm = build_pattern_maps(Mr, Mc, Nr, Nc);
                    const int M = Mr * Mc, N = Nr * Nc;
                    CHECK(pm.B == (Mr - Nr + 1) * (Mc - Nc + 1));
                    // brute force: slide the layer over every cell where it fits
                    std::set<std::vector<int>> masks;
                    for (int r = 0; r < Mr; ++r)
                        for (int c = 0; c < Mc; ++c) {
                            if (r + Nr > Mr || c + Nc > Mc) continue;
                            std::vector<int> mask(static_cast<std::size_t>(M), 0);
                            for (int i = 0; i < Nr; ++i)
                                for (int j = 0; j < Nc; ++j) mask[static_cast<std::size_t>((r + i) * Mc + c + j)] = 1;
                            masks.insert(mask);
                        }
                    CHECK(static_cast<int>(masks.size()) == pm.B);
                    for (int b = 0; b < pm.B; ++b) {
                        const auto& E = pm.E[b];
                        for (int n = 0; n < N; ++n) CHECK(E.col(n).sum() == 1);
                        for (int m = 0; m < M; ++m) CHECK(E.row(m).sum() <= 1);
                        Eigen::VectorXi cover = E * Eigen::VectorXi::Ones(N) + pm.e[b];
                        CHECK(cover == Eigen::VectorXi::Ones(M));
                        std::vector<int> mask(static_cast<std::size_t>(M));
                        for (int m = 0; m < M; ++m) mask[static_cast<std::size_t>(m)] = 1 - pm.e[b](m);
                        CHECK(masks.count(mask) == 1);
                    }
                }
}

TEST_CASE("single-layer baseline") {
    auto pm = build_pattern_maps(2, 3, 0, 0);
    CHECK(pm.B == 1);
    CHECK(pm.N() == 0);
    CVec pb = equivalent_phase(pm, CVec(0), 0);
    CHECK((pb - CVec::Ones(6)).norm() == 0.0);
}

TEST_CASE("equivalent phase places S2 phases on covered cells") {
    auto pm = build_pattern_maps(2, 2, 1, 2);
    CVec phi(2);
    phi << kJ, -kJ;
    CVec p0 = equivalent_phase(pm, phi, 0);
    CVec p1 = equivalent_phase(pm, phi, 1);
    // pattern 0 covers the top row, pattern 1 the bottom row
    CHECK(std::abs(p0(0) - kJ) < 1e-15);
    CHECK(std::abs(p0(1) + kJ) < 1e-15);
    CHECK(std::abs(p0(2) - 1.0) < 1e-15);
    CHECK(std::abs(p0(3) - 1.0) < 1e-15);
    CHECK(std::abs(p1(0) - 1.0) < 1e-15);
    CHECK(std::abs(p1(2) - kJ) < 1e-15);
    CHECK(std::abs(p1(3) + kJ) < 1e-15);
    CHECK_THROWS_AS(equivalent_phase(pm, phi, 2), Error);
}

TEST_CASE("all-ones S2 phases leave every pattern transparent") {
    auto pm = build_pattern_maps(4, 3, 2, 2);
    for (int b = 0; b < pm.B; ++b) CHECK((equivalent_phase(pm, CVec::Ones(4), b) - CVec::Ones(12)).norm() == 0.0);
}

TEST_CASE("combined reflection stays unit-modulus and cancels with the conjugate") {
    Rng rng(11);
    auto pm = build_pattern_maps(4, 4, 2, 3);
    for (int trial = 0; trial < 50; ++trial) {
        CVec theta = random_phases(16, rng), phi = random_phases(6, rng);
        for (int b = 0; b < pm.B; ++b) {
            CVec pb = equivalent_phase(pm, phi, b);
            CVec u = combined_reflection(pb, theta);
            CHECK((u.cwiseAbs() - RVec::Ones(16)).cwiseAbs().maxCoeff() < 1e-14);
            CVec one = combined_reflection(pb, CVec(pb.conjugate()));
            CHECK((one - CVec::Ones(16)).norm() < 1e-13);
        }
    }
    CHECK_THROWS_AS(combined_reflection(CVec::Ones(3), CVec::Ones(4)), Error);
}

TEST_CASE("oversized layer is rejected") {
    CHECK_THROWS_AS(build_pattern_maps(2, 2, 3, 1), Error);
    CHECK_THROWS_AS(build_pattern_maps(2, 2, 1, 0), Error);
}
