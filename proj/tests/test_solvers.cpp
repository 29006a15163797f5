// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mris/orchestrator.hpp"

using namespace mris;
using namespace mris::solvers;

namespace {

scenario::SystemConfig small_cfg() { return scenario::load_config(MRIS_SOURCE_DIR "/configs/small.ini"); }

struct Fixture {
    orchestrator::ScenarioData sc;
    orchestrator::SolutionState st;
};

Fixture prepare(unsigned long seed, const std::vector<std::string>& overrides = {}) {
    auto cfg = small_cfg();
    for (const auto& o : overrides) scenario::apply_override(cfg, o);
    cfg.seed = seed;
    Rng rng(seed);
    Fixture f;
    f.sc = orchestrator::build_scenario(cfg, rng);
    f.st = orchestrator::initialize_solution(f.sc, rng);
    return f;
}

}  // namespace

TEST_CASE("unit-modulus projection keeps the phase of the shifted point") {
    Rng rng(61);
    std::normal_distribution<double> nd;
    for (int t = 0; t < 100; ++t) {
        CVec nu(5), lam(5);
        for (int i = 0; i < 5; ++i) {
            nu(i) = cd(nd(rng), nd(rng));
            lam(i) = cd(nd(rng), nd(rng));
        }
        const double rho = 0.1 + t * 0.01;
        CVec p = project_unit_modulus(nu, lam, rho);
        for (int i = 0; i < 5; ++i) {
            CHECK(std::abs(p(i)) == doctest::Approx(1.0).epsilon(1e-14));
            cd a = nu(i) / rho + lam(i);
            CHECK(std::abs(p(i) - a / std::abs(a)) < 1e-13);
        }
        // nearest unit-modulus point: no other phase is closer
        for (int i = 0; i < 5; ++i) {
            cd a = nu(i) / rho + lam(i);
            for (int s = 0; s < 16; ++s) CHECK(std::abs(a - p(i)) <= std::abs(a - std::polar(1.0, s * kPi / 8)) + 1e-12);
        }
    }
    CHECK_THROWS_AS(project_unit_modulus(CVec::Ones(2), CVec::Zero(2), 0.0), Error);
}

TEST_CASE("solver-unit conversion round trips") {
    auto f = prepare(2);
    Design phys = to_physical_units(f.st.design, f.sc.inst.P_max);
    Design back = to_solver_units(phys, f.sc.inst.P_max);
    for (int k = 0; k < f.sc.inst.K; ++k)
        for (int b = 0; b < f.sc.inst.B; ++b) CHECK((back.W[k][b] - f.st.design.W[k][b]).norm() < 1e-12);
    CHECK((back.theta - f.st.design.theta).norm() == 0.0);
}

TEST_CASE("evaluation agrees with the exact metrics at zero uncertainty") {
    // with the Eve radius forced to zero the worst case equals the nominal Eve rate
    auto f = prepare(3);
    Instance inst = f.sc.inst;
    for (auto& e : inst.eps) e = 0.0;
    auto ev = evaluate(inst, f.st.design, zero_offsets(inst));
    Rng rng(1);
    auto rep = orchestrator::report(f.st, f.sc, 0, rng);
    for (int k = 0; k < inst.K; ++k) {
        CHECK(ev.rate(k) == doctest::Approx(rep.user_rate[k]).epsilon(1e-9));
        const double sec = std::max(0.0, ev.rate(k) - ev.v(k));
        CHECK(sec == doctest::Approx(rep.secrecy_nominal[k]).epsilon(1e-7));
    }
    CHECK(ev.t == doctest::Approx((ev.rate - ev.v).minCoeff()).epsilon(1e-12));
}

TEST_CASE("robust evaluation lower-bounds the sampled secrecy") {
    for (unsigned long seed : {4ul, 5ul}) {
        auto f = prepare(seed);
        auto ev = evaluate(f.sc.inst, f.st.design, f.st.off);
        Rng rng(seed);
        auto rep = orchestrator::report(f.st, f.sc, 2000, rng);
        for (int k = 0; k < f.sc.inst.K; ++k) CHECK(ev.rate(k) - ev.v(k) <= rep.user_rate[k] - rep.eve_rate_worst[k] + 1e-9);
    }
}

TEST_CASE("beamformer block never lowers the evaluated objective") {
    for (unsigned long seed : {6ul, 7ul, 8ul}) {
        auto f = prepare(seed);
        Design d = f.st.design;
        Offsets off = f.st.off;
        const double t0 = evaluate(f.sc.inst, d, off).t;
        auto r = solve_beamformer(f.sc.inst, d, off);
        auto ev = evaluate(f.sc.inst, d, off);
        if (!r.restoration) CHECK(ev.t >= t0 - 1e-9);
        if (r.accepted) {
            CHECK(r.t_after == doctest::Approx(ev.t).epsilon(1e-12));
            for (const auto& c : r.certs) CHECK(certificate_violation(c) <= 1e-6 * (1 + std::abs(c.rhs)));
        }
        for (int b = 0; b < f.sc.inst.B; ++b) CHECK(ev.power(b) <= 1.0 + 1e-6);
    }
}

TEST_CASE("phase block keeps unit modulus and reports a small residual") {
    auto f = prepare(9);
    Design d = f.st.design;
    Offsets off = f.st.off;
    solve_beamformer(f.sc.inst, d, off);
    const double t0 = evaluate(f.sc.inst, d, off).t;
    PddTrace tr;
    auto r = pdd_phase(f.sc.inst, d, off, PhaseBlock::S1, &tr);
    CHECK((d.theta.cwiseAbs() - RVec::Ones(d.theta.size())).cwiseAbs().maxCoeff() < 1e-12);
    if (r.accepted) {
        CHECK(tr.final_residual_inf <= 1e-4);
        CHECK(evaluate(f.sc.inst, d, off).t >= t0 - 1e-9);
        for (const auto& c : r.certs) CHECK(certificate_violation(c) <= 1e-6 * (1 + std::abs(c.rhs)));
    }
}

TEST_CASE("assignment with one pattern is trivial") {
    auto f = prepare(10, {"system.M_r=2", "system.M_c=2", "system.N_r=2", "system.N_c=2"});
    REQUIRE(f.sc.inst.B == 1);
    Design d = f.st.design;
    Offsets off = f.st.off;
    auto r = solve_assignment(f.sc.inst, d, off);
    CHECK(d.chi == Eigen::MatrixXi::Ones(f.sc.inst.K, 1));
    CHECK(r.status != conic::Status::Error);
}

TEST_CASE("AN seed has the requested power and spares the served users") {
    auto f = prepare(11);
    const auto& inst = f.sc.inst;
    for (int b = 0; b < inst.B; ++b) {
        CVec an = seed_an(inst, f.st.design, b, 0.2);
        if (an.norm() == 0) continue;
        CHECK(an.squaredNorm() == doctest::Approx(0.2).epsilon(1e-9));
        CVec u = surface::reflection(inst.pm, f.st.design.theta, f.st.design.phi, b);
        for (int k = 0; k < inst.K; ++k)
            if (f.st.design.chi(k, b)) {
                CVec g = channel::effective_channel(inst.h_user[k], u, inst.Gn);
                CHECK(std::abs((g.transpose() * an)(0, 0)) <= 1e-9 * g.norm());
            }
    }
}
