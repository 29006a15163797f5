// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mris/metrics.hpp"
#include "mris/wmmse.hpp"

using namespace mris;
using namespace mris::wmmse;

namespace {

CVec randc(int n, Rng& rng, double s = 1.0) {
    std::normal_distribution<double> nd(0.0, s);
    CVec v(n);
    for (int i = 0; i < n; ++i) v(i) = cd(nd(rng), nd(rng));
    return v;
}

struct Case {
    CVec h, f;
    std::vector<CVec> W;
    Eigen::VectorXi chi;
    double sigma2;
};

Case random_case(Rng& rng) {
    std::uniform_int_distribution<int> ui(1, 4);
    std::uniform_real_distribution<double> us(0.01, 3.0);
    Case c;
    const int L = ui(rng) + 1, K = ui(rng);
    c.h = randc(L, rng);
    for (int k = 0; k < K; ++k) c.W.push_back(randc(L, rng, us(rng)));
    c.f = randc(L, rng, us(rng) * 0.3);
    c.chi = Eigen::VectorXi::Zero(K);
    for (int k = 0; k < K; ++k) c.chi(k) = ui(rng) % 2;
    c.chi(0) = 1;
    c.sigma2 = us(rng);
    return c;
}

}  // namespace

TEST_CASE("closed-form auxiliaries make the surrogate equal the rate") {
    Rng rng(31);
    for (int t = 0; t < 1000; ++t) {
        auto c = random_case(rng);
        auto r = metrics::user_rate(c.h, c.W, c.f, c.chi, 0, c.sigma2);
        cd mu = update_mu(c.h, c.W, c.f, c.chi, 0, c.sigma2);
        double z = update_z(r.sinr);
        double y = surrogate_rate(z, mu, c.h, c.W, c.f, c.chi, 0, c.sigma2);
        CHECK(std::abs(y - r.rate) <= 1e-9);
    }
}

TEST_CASE("surrogate never exceeds the rate") {
    Rng rng(32);
    std::normal_distribution<double> nd;
    std::uniform_real_distribution<double> uz(0.05, 10.0);
    for (int t = 0; t < 500; ++t) {
        auto c = random_case(rng);
        double rate = metrics::user_rate(c.h, c.W, c.f, c.chi, 0, c.sigma2).rate;
        cd mu(nd(rng), nd(rng));
        double y = surrogate_rate(uz(rng), mu, c.h, c.W, c.f, c.chi, 0, c.sigma2);
        CHECK(y <= rate + 1e-12);
    }
}

TEST_CASE("closed-form receiver minimizes the MSE and z inverts it") {
    Rng rng(33);
    std::normal_distribution<double> nd(0, 0.05);
    for (int t = 0; t < 200; ++t) {
        auto c = random_case(rng);
        cd mu = update_mu(c.h, c.W, c.f, c.chi, 0, c.sigma2);
        double e0 = mse(mu, c.h, c.W, c.f, c.chi, 0, c.sigma2);
        for (int p = 0; p < 5; ++p)
            CHECK(mse(mu + cd(nd(rng), nd(rng)), c.h, c.W, c.f, c.chi, 0, c.sigma2) >= e0 - 1e-12);
        double sinr = metrics::user_rate(c.h, c.W, c.f, c.chi, 0, c.sigma2).sinr;
        CHECK(update_z(sinr) == doctest::Approx(1.0 / e0).epsilon(1e-9));
    }
}

TEST_CASE("domain errors") {
    CHECK_THROWS_AS(update_z(-0.1), Error);
    CVec h = CVec::Ones(2);
    Eigen::VectorXi chi = Eigen::VectorXi::Ones(1);
    CHECK_THROWS_AS(surrogate_rate(0.0, cd(1, 0), h, {h}, CVec::Zero(2), chi, 0, 1.0), Error);
}
