// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mris/channel.hpp"

using namespace mris;
using namespace mris::channel;

TEST_CASE("BS steering vector has unit-modulus entries and a linear phase ramp") {
    CVec a = steer_bs(0.3, 8, 0.05, 0.1);
    REQUIRE(a.size() == 8);
    for (int l = 0; l < 8; ++l) CHECK(std::abs(a(l)) == doctest::Approx(1.0));
    CHECK(std::abs(a(0) - cd(1, 0)) < 1e-15);
    cd step = a(1) / a(0);
    for (int l = 1; l < 8; ++l) CHECK(std::abs(a(l) / a(l - 1) - step) < 1e-12);
    CHECK(std::arg(step) == doctest::Approx(2 * kPi * 0.5 * std::sin(0.3)));
}

TEST_CASE("broadside MRIS steering vector is all ones") {
    CVec a = steer_mris(0.7, 0.0, 3, 4, 0.025, 0.1);
    CHECK((a - CVec::Ones(12)).norm() < 1e-14);
}

TEST_CASE("MRIS steering vector is the Kronecker product of row and column ramps") {
    const int Mr = 3, Mc = 4;
    double az = 0.4, el = -0.6;
    CVec a = steer_mris(az, el, Mr, Mc, 0.025, 0.1);
    auto f = spatial_freq(az, el, 0.025, 0.1);
    for (int r = 0; r < Mr; ++r)
        for (int c = 0; c < Mc; ++c) {
            cd ref = std::polar(1.0, 2 * kPi * (f.dr * r + f.dc * c));
            CHECK(std::abs(a(r * Mc + c) - ref) < 1e-12);
        }
    CHECK(a.norm() == doctest::Approx(std::sqrt(12.0)));
}

TEST_CASE("effective channel equals the dense product") {
    Rng rng(2);
    std::normal_distribution<double> n;
    const int M = 6, L = 4;
    CMat G(M, L);
    CVec h(M), u(M);
    for (int i = 0; i < M; ++i) {
        for (int l = 0; l < L; ++l) G(i, l) = cd(n(rng), n(rng));
        h(i) = cd(n(rng), n(rng));
        u(i) = std::polar(1.0, n(rng));
    }
    CVec e = effective_channel(h, u, G);
    // h^H diag(u) G w = e^T w for every w
    CVec w(L);
    for (int l = 0; l < L; ++l) w(l) = cd(n(rng), n(rng));
    cd direct = (h.adjoint() * u.asDiagonal() * G * w)(0, 0);
    cd viae = (e.transpose() * w)(0, 0);
    CHECK(std::abs(direct - viae) < 1e-12);
    CHECK_THROWS_AS(effective_channel(h.head(3), u, G), Error);
}

TEST_CASE("synthesized channels have the configured shapes and path loss") {
    scenario::SystemConfig cfg;
    cfg.kappa_BR = cfg.kappa_RU = 1e12;  // pure LoS
    Rng rng(4);
    auto layout = scenario::place_nodes(cfg, rng);
    auto ch = synthesize_channels(cfg, layout, rng);
    REQUIRE(ch.G.rows() == cfg.M());
    REQUIRE(ch.G.cols() == cfg.L);
    REQUIRE(static_cast<int>(ch.h_user.size()) == cfg.K);
    // LoS G is rank one with Frobenius norm sqrt(beta0) / d * sqrt(M L)
    double expect = std::sqrt(cfg.beta0) / ch.d_BR * std::sqrt(double(cfg.M() * cfg.L));
    CHECK(ch.G.norm() == doctest::Approx(expect).epsilon(1e-5));
    Eigen::JacobiSVD<CMat> svd(ch.G);
    CHECK(svd.singularValues()(1) < 1e-5 * svd.singularValues()(0));
    auto pv = scenario::polar_from_mris(layout, layout.user_pos[0]);
    CHECK(ch.h_user[0].norm() == doctest::Approx(std::sqrt(cfg.beta0) / pv.d * std::sqrt(double(cfg.M()))).epsilon(1e-5));
}

TEST_CASE("channel synthesis is deterministic and dumps round trip") {
    scenario::SystemConfig cfg;
    Rng a(9), b(9);
    auto la = scenario::place_nodes(cfg, a);
    auto lb = scenario::place_nodes(cfg, b);
    auto ca = synthesize_channels(cfg, la, a);
    auto cb = synthesize_channels(cfg, lb, b);
    CHECK((ca.G - cb.G).norm() == 0.0);
    ca.h_eve_nominal.push_back(CVec::Ones(cfg.M()));
    ca.eps_eve.push_back(0.25);
    auto back = load_channels(dump_channels(ca));
    CHECK((back.G - ca.G).norm() < 1e-15 * ca.G.norm());
    CHECK((back.h_user[1] - ca.h_user[1]).norm() < 1e-15 * ca.h_user[1].norm());
    CHECK(back.eps_eve[0] == 0.25);
}
