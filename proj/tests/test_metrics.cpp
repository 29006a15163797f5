// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mris/metrics.hpp"

using namespace mris;
using namespace mris::metrics;

namespace {

struct Inst {
    int M = 4, L = 3, K = 3;
    CMat G;
    CVec h_eve, u;
    std::vector<CVec> W;
    CVec f;
    Eigen::VectorXi chi;
};

CVec randc(int n, Rng& rng, double s = 1.0) {
    std::normal_distribution<double> nd(0.0, s);
    CVec v(n);
    for (int i = 0; i < n; ++i) v(i) = cd(nd(rng), nd(rng));
    return v;
}

Inst make(Rng& rng) {
    Inst I;
    I.G.resize(I.M, I.L);
    for (int l = 0; l < I.L; ++l) I.G.col(l) = randc(I.M, rng);
    I.h_eve = randc(I.M, rng);
    std::uniform_real_distribution<double> ua(0, 2 * kPi);
    I.u.resize(I.M);
    for (int m = 0; m < I.M; ++m) I.u(m) = std::polar(1.0, ua(rng));
    for (int k = 0; k < I.K; ++k) I.W.push_back(randc(I.L, rng));
    I.f = randc(I.L, rng, 0.5);
    I.chi = Eigen::VectorXi::Ones(I.K);
    I.chi(2) = 0;
    return I;
}

}  // namespace

TEST_CASE("single user without AN has SINR |h w|^2 / sigma^2") {
    Rng rng(1);
    CVec h = randc(4, rng), w = randc(4, rng);
    Eigen::VectorXi chi = Eigen::VectorXi::Ones(1);
    auto r = user_rate(h, {w}, CVec::Zero(4), chi, 0, 0.5);
    double s = std::norm((h.transpose() * w)(0, 0)) / 0.5;
    CHECK(r.sinr == doctest::Approx(s).epsilon(1e-13));
    CHECK(r.rate == doctest::Approx(std::log1p(s)).epsilon(1e-13));
}

TEST_CASE("zero beamformer gives zero rate") {
    Rng rng(2);
    CVec h = randc(4, rng);
    Eigen::VectorXi chi = Eigen::VectorXi::Ones(2);
    auto r = user_rate(h, {CVec::Zero(4), randc(4, rng)}, randc(4, rng), chi, 0, 1.0);
    CHECK(r.rate == 0.0);
}

TEST_CASE("user rate matches a term-by-term evaluation") {
    Rng rng(3);
    for (int t = 0; t < 100; ++t) {
        auto I = make(rng);
        CVec h = randc(I.L, rng);
        for (int k = 0; k < 2; ++k) {
            double sig = std::norm(h.dot(I.W[k].conjugate()));
            double den = 0.7 + std::norm(h.dot(I.f.conjugate()));
            for (int i = 0; i < I.K; ++i)
                if (i != k && I.chi(i)) den += std::norm(h.dot(I.W[i].conjugate()));
            auto r = user_rate(h, I.W, I.f, I.chi, k, 0.7);
            CHECK(std::abs(r.sinr - sig / den) <= 1e-12 * std::max(1.0, sig / den));
        }
    }
}

TEST_CASE("Eve rate uses the cascaded channel") {
    Rng rng(4);
    for (int t = 0; t < 100; ++t) {
        auto I = make(rng);
        CVec he = channel::effective_channel(I.h_eve, I.u, I.G);
        double sig = std::norm((he.transpose() * I.W[0])(0, 0));
        double den = 0.3 + std::norm((he.transpose() * I.f)(0, 0)) + std::norm((he.transpose() * I.W[1])(0, 0));
        double r = eve_rate(I.h_eve, I.u, I.G, I.W, I.f, I.chi, 0, 0.3);
        CHECK(std::abs(r - std::log1p(sig / den)) <= 1e-12 * std::max(1.0, r));
    }
}

TEST_CASE("AN drives the Eve rate to zero monotonically") {
    Rng rng(5);
    auto I = make(rng);
    double prev = std::numeric_limits<double>::infinity();
    for (double s : {0.0, 1.0, 10.0, 100.0, 1000.0}) {
        double r = eve_rate(I.h_eve, I.u, I.G, I.W, CVec(I.f * s), I.chi, 0, 0.3);
        CHECK(r <= prev);
        prev = r;
    }
    CHECK(prev < 1e-3);
    std::vector<CVec> zero(3, CVec::Zero(I.L));
    CHECK(eve_rate(I.h_eve, I.u, I.G, zero, CVec::Zero(I.L), I.chi, 0, 0.3) == 0.0);
}

TEST_CASE("beampattern gain expands into per-beam terms") {
    Rng rng(6);
    for (int t = 0; t < 100; ++t) {
        auto I = make(rng);
        CVec he = channel::effective_channel(I.h_eve, I.u, I.G);
        double ref = std::norm((he.transpose() * I.f)(0, 0));
        for (int k = 0; k < I.K; ++k)
            if (I.chi(k)) ref += std::norm((he.transpose() * I.W[k])(0, 0));
        double g = beampattern_gain(I.h_eve, I.u, I.G, I.W, I.f, I.chi);
        CHECK(std::abs(g - ref) <= 1e-12 * std::max(1.0, ref));
    }
}

TEST_CASE("matched beam attains the Cauchy-Schwarz gain") {
    Rng rng(7);
    auto I = make(rng);
    CVec he = channel::effective_channel(I.h_eve, I.u, I.G);
    CVec w = he.conjugate() / he.norm() * 2.0;
    Eigen::VectorXi chi = Eigen::VectorXi::Ones(1);
    double g = beampattern_gain(I.h_eve, I.u, I.G, {w}, CVec::Zero(I.L), chi);
    CHECK(g == doctest::Approx(he.squaredNorm() * 4.0).epsilon(1e-12));
    std::vector<CVec> zero(1, CVec::Zero(I.L));
    CHECK(beampattern_gain(I.h_eve, I.u, I.G, zero, CVec::Zero(I.L), chi) == 0.0);
}

namespace {

struct Setup {
    Design d;
    channel::ChannelSet ch;
    surface::PatternMap pm;
    std::vector<EveModel> eves;
};

Setup setup(int J, Rng& rng) {
    Setup s;
    s.pm = surface::build_pattern_maps(2, 2, 1, 2);
    s.ch.G = CMat(4, 3);
    for (int l = 0; l < 3; ++l) s.ch.G.col(l) = randc(4, rng, 1e-3);
    for (int k = 0; k < 2; ++k) s.ch.h_user.push_back(randc(4, rng, 1e-3));
    s.d.theta = CVec::Ones(4);
    s.d.phi = CVec::Ones(2);
    s.d.chi = Eigen::MatrixXi::Zero(2, 2);
    s.d.chi(0, 0) = 1;
    s.d.chi(1, 1) = 1;
    s.d.W.assign(2, std::vector<CVec>(2));
    for (int k = 0; k < 2; ++k)
        for (int b = 0; b < 2; ++b) s.d.W[k][b] = randc(3, rng, 0.1);
    s.d.f = {randc(3, rng, 0.02), randc(3, rng, 0.02)};
    for (int j = 0; j < J; ++j) {
        EveModel e;
        e.unc.d_bar = 60;
        e.unc.theta_bar = 0.1;
        e.unc.phi_bar = 0.0;
        e.unc.D = 1;
        e.unc.Theta = e.unc.Psi = deg2rad(1);
        e.unc.eps_nlos = {0.1};
        e.unc.kappa = 3;
        e.h_nominal = channel::steer_mris(0.1, 0.0, 2, 2, 0.025, 0.1) * std::sqrt(1e-3) / 60.0;
        s.eves.push_back(e);
    }
    return s;
}

}  // namespace

TEST_CASE("without Eves the secrecy rate is the user rate") {
    Rng rng(8);
    auto s = setup(0, rng);
    auto r = secrecy_report(s.d, s.ch, s.pm, s.eves, 1e-11, 1e-11, 2, 2, 100, rng);
    for (int k = 0; k < 2; ++k) CHECK(r.secrecy_worst[k] == doctest::Approx(r.user_rate[k]));
    CHECK(r.min_secrecy_nominal == doctest::Approx(std::min(r.user_rate[0], r.user_rate[1])));
}

TEST_CASE("sampled worst case dominates the nominal Eve rate") {
    Rng rng(9);
    auto s = setup(1, rng);
    auto r = secrecy_report(s.d, s.ch, s.pm, s.eves, 1e-11, 1e-11, 2, 2, 500, rng);
    for (int k = 0; k < 2; ++k) {
        CHECK(r.eve_rate_worst[k] >= r.eve_rate_nominal[k]);
        CHECK(r.secrecy_worst[k] <= r.secrecy_nominal[k]);
        CHECK(r.secrecy_worst[k] >= 0.0);
    }
    auto r0 = secrecy_report(s.d, s.ch, s.pm, s.eves, 1e-11, 1e-11, 2, 2, 0, rng);
    for (int k = 0; k < 2; ++k) CHECK(r0.eve_rate_worst[k] == r0.eve_rate_nominal[k]);
}

TEST_CASE("report is invariant to global phases") {
    Rng rng(10);
    auto s = setup(1, rng);
    Rng r1(3), r2(3);
    auto a = secrecy_report(s.d, s.ch, s.pm, s.eves, 1e-11, 1e-11, 2, 2, 50, r1);
    Design d2 = s.d;
    d2.theta *= std::polar(1.0, 0.7);
    for (auto& row : d2.W)
        for (auto& w : row) w *= std::polar(1.0, -1.3);
    auto b = secrecy_report(d2, s.ch, s.pm, s.eves, 1e-11, 1e-11, 2, 2, 50, r2);
    CHECK(a.min_secrecy_worst == doctest::Approx(b.min_secrecy_worst).epsilon(1e-10));
    CHECK(a.min_secrecy_nominal == doctest::Approx(b.min_secrecy_nominal).epsilon(1e-10));
}
