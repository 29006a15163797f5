// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mris/conic.hpp"

using namespace mris;
using namespace mris::conic;

TEST_CASE("linear bound is attained") {
    Model m;
    int x = m.add_var("x");
    m.ge(Affine::var(x) - 3.0);
    m.minimize(Affine::var(x));
    auto s = solve(m);
    CHECK(s.status == Status::Optimal);
    CHECK(s.x(x) == doctest::Approx(3.0).epsilon(1e-7));
}

TEST_CASE("2x2 PSD eigenvalue condition") {
    Model m;
    int x = m.add_var("x");
    RealLmi L;
    L.c = RMat::Zero(2, 2);
    L.c(0, 1) = L.c(1, 0) = 1.0;
    L.t.emplace_back(x, RMat::Identity(2, 2));
    m.lmi_real(L);
    m.minimize(Affine::var(x));
    auto s = solve(m);
    CHECK(s.status == Status::Optimal);
    CHECK(s.x(x) == doctest::Approx(1.0).epsilon(1e-7));
}

TEST_CASE("random feasible SOC instance has small primal residual") {
    Rng rng(7);
    std::normal_distribution<double> nd;
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 6;
        Model m;
        std::vector<int> v;
        for (int i = 0; i < n; ++i) v.push_back(m.add_var("x"));
        // ||x - c|| <= 1 for a random center, plus one random halfspace through the center
        std::vector<Affine> rows;
        RVec c(n), a(n);
        for (int i = 0; i < n; ++i) {
            c(i) = nd(rng);
            a(i) = nd(rng);
            rows.push_back(Affine::var(v[i]) - c(i));
        }
        m.soc(Affine(1.0), rows);
        Affine h(a.dot(c));
        for (int i = 0; i < n; ++i) h -= Affine::var(v[i], a(i));
        m.ge(h);
        Affine obj;
        for (int i = 0; i < n; ++i) obj += Affine::var(v[i], nd(rng));
        m.minimize(obj);
        auto s = solve(m);
        REQUIRE(s.status == Status::Optimal);
        RVec x(n);
        for (int i = 0; i < n; ++i) x(i) = s.x(v[i]);
        CHECK((x - c).norm() <= 1.0 + 1e-7);
        CHECK(a.dot(x - c) <= 1e-7);
    }
}

TEST_CASE("complex Hermitian LMI") {
    // minimize t s.t. [[t, z],[conj z, t]] >= 0 with z = 1 + 2j: t = |z|
    Model m;
    int t = m.add_var("t");
    HermAffine F(2);
    F.c(0, 1) = cd(1, 2);
    F.c(1, 0) = cd(1, -2);
    F.add(t, CMat::Identity(2, 2));
    m.lmi(F);
    m.minimize(Affine::var(t));
    auto s = solve(m);
    CHECK(s.status == Status::Optimal);
    CHECK(s.x(t) == doctest::Approx(std::sqrt(5.0)).epsilon(1e-7));
}

TEST_CASE("infeasible problem is reported") {
    Model m;
    int x = m.add_var("x");
    m.ge(Affine::var(x) - 2.0);
    m.ge(1.0 - Affine::var(x));
    m.minimize(Affine::var(x));
    auto s = solve(m);
    CHECK(s.status == Status::Infeasible);
}

TEST_CASE("equality constraints and rotated cone") {
    // max x + y s.t. x^2 + y^2 <= 2 t, t = 1 -> x = y = 1 (value 2)
    Model m;
    int x = m.add_var("x"), y = m.add_var("y"), t = m.add_var("t");
    m.eq(Affine::var(t) - 1.0);
    m.rsoc({Affine::var(x), Affine::var(y)}, 2.0 * Affine::var(t), Affine(1.0));
    m.maximize(Affine::var(x) + Affine::var(y));
    auto s = solve(m);
    CHECK(s.status == Status::Optimal);
    CHECK(s.objective == doctest::Approx(2.0).epsilon(1e-7));
}
