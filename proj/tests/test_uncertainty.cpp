// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mris/uncertainty.hpp"

using namespace mris;
using namespace mris::uncertainty;

namespace {

EveUncertainty reference_box(double D, double ang) {
    EveUncertainty u;
    u.d_bar = 50;
    u.theta_bar = kPi / 3;
    u.phi_bar = kPi / 3;
    u.D = D;
    u.Theta = ang;
    u.Psi = ang;
    u.eps_nlos = {0.377};
    u.kappa = (0.377 / 0.1) * (0.377 / 0.1);
    return u;
}

}  // namespace

TEST_CASE("phase deviation of the reference element is zero") {
    auto u = reference_box(1, deg2rad(2));
    CHECK(phase_perturbation_bound(u, 0, 0, 32) == 0.0);
    CHECK(phase_perturbation_bound(u, 0, 5, 32) > 0.0);
}

TEST_CASE("phase deviation grows with the element offset and the angular box") {
    auto a = reference_box(0, deg2rad(1)), b = reference_box(0, deg2rad(3));
    CHECK(phase_perturbation_bound(a, 0, 9, 32) > phase_perturbation_bound(a, 0, 3, 32));
    CHECK(phase_perturbation_bound(b, 0, 9, 32) > phase_perturbation_bound(a, 0, 9, 32));
}

TEST_CASE("no position error leaves only the NLoS disk") {
    auto u = reference_box(0, 0);
    auto g = bound_geometry(u, 1, 10);
    for (const auto& e : g.elem) {
        CHECK(e.delta_psi == 0.0);
        CHECK(e.r_tilde == doctest::Approx(e.r_sup));
        CHECK(e.r_tilde == doctest::Approx(e.r_tilde_closed_form));
    }
    auto t = tightness_metrics(g);
    CHECK(t.eta == doctest::Approx(1.0));
    CHECK(t.eps_norm == doctest::Approx(0.1).epsilon(1e-6));
}

TEST_CASE("safe radius never undercuts the closed form") {
    for (double D : {0.0, 1.0, 3.0, 5.0})
        for (double a : {0.0, 1.0, 2.5, 5.0}) {
            auto g = bound_geometry(reference_box(D, deg2rad(a)), 1, 10);
            for (const auto& e : g.elem) CHECK(e.r_tilde >= e.r_tilde_closed_form * (1 - 1e-12));
            auto t = tightness_metrics(g);
            CHECK(t.eta > 0.0);
            CHECK(t.eta <= 1.0 + 1e-12);
        }
}

TEST_CASE("actual region area grows with the nested uncertainty box") {
    // the covering disk is a construction, not a minimal enclosing circle, so
    // only the area of the true region is guaranteed to be monotone
    auto area = [](double D, double a, int m) {
        return bound_geometry(reference_box(D, deg2rad(a)), 1, 10).elem[static_cast<std::size_t>(m)].A_act;
    };
    for (int m : {1, 5, 9})
        for (double a : {0.0, 1.0, 3.0}) {
            double prev = 0;
            for (double D : {0.0, 1.0, 2.0, 3.0, 4.0, 5.0}) {
                double e = area(D, a, m);
                CHECK(e >= prev * (1 - 1e-12));
                prev = e;
            }
        }
    for (int m : {1, 5, 9})
        for (double D : {0.0, 2.0, 5.0}) {
            double prev = 0;
            for (double a : {0.0, 0.5, 1.0, 1.5, 2.0}) {
                double e = area(D, a, m);
                CHECK(e >= prev * (1 - 1e-12));
                prev = e;
            }
        }
}

TEST_CASE("sampled channels stay inside the sphere") {
    Rng rng(21);
    for (double D : {0.0, 2.0, 5.0})
        for (double a : {0.0, 2.0, 5.0}) {
            auto u = reference_box(D, deg2rad(a));
            auto g = bound_geometry(u, 1, 10);
            auto rc = robust_channel(u, g, 1, 10);
            for (int s = 0; s < 5000; ++s) {
                CVec h = sample_uncertain_channel(u, 1, 10, rng);
                CHECK((h - rc.h_nominal).norm() <= rc.eps_sphere * (1 + 1e-12));
            }
        }
}

TEST_CASE("two-dimensional surfaces are contained as well") {
    Rng rng(22);
    auto u = reference_box(2, deg2rad(3));
    u.theta_bar = 0.2;
    u.phi_bar = -0.4;
    auto g = bound_geometry(u, 3, 4);
    auto rc = robust_channel(u, g, 3, 4);
    double worst = 0;
    for (int s = 0; s < 20000; ++s)
        worst = std::max(worst, (sample_uncertain_channel(u, 3, 4, rng) - rc.h_nominal).norm() / rc.eps_sphere);
    CHECK(worst <= 1 + 1e-12);
}

TEST_CASE("configuration feeds the Eve description") {
    scenario::SystemConfig cfg;
    cfg.placement = scenario::Placement::Polar;
    cfg.user_polar = {Point3(60, -50, -10), Point3(60, 50, 10)};
    cfg.eve_polar = {Point3(55, 5, 3)};
    Rng rng(1);
    auto L = scenario::place_nodes(cfg, rng);
    auto u = from_config(cfg, L, 0);
    CHECK(u.d_bar == doctest::Approx(55));
    CHECK(rad2deg(u.theta_bar) == doctest::Approx(5));
    CHECK(rad2deg(u.phi_bar) == doctest::Approx(3));
    CHECK(u.eps(0) == doctest::Approx(cfg.eps_nlos_value()));
}
