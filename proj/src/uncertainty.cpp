// SPDX-License-Identifier: Apache-2.0
#include "mris/uncertainty.hpp"

#include <algorithm>

#include "mris/channel.hpp"

namespace mris::uncertainty {

namespace {

double phase_offset(const EveUncertainty& unc, double d_theta, double d_phi, int m_r, int m_c) {
    auto f0 = channel::spatial_freq(unc.theta_bar, unc.phi_bar, unc.d_R, unc.lambda_c);
    auto f1 = channel::spatial_freq(unc.theta_bar + d_theta, unc.phi_bar + d_phi, unc.d_R, unc.lambda_c);
    return 2.0 * kPi * ((f1.dr - f0.dr) * m_r + (f1.dc - f0.dc) * m_c);
}

}  // namespace

double phase_perturbation_bound(const EveUncertainty& unc, int m_r, int m_c, int grid) {
    if (grid < 2) throw Error("argument", "phase_perturbation_bound needs grid >= 2");
    if ((unc.Theta == 0.0 && unc.Psi == 0.0) || (m_r == 0 && m_c == 0)) return 0.0;
    double best = 0.0;
    auto probe = [&](double a, double e) { best = std::max(best, std::abs(phase_offset(unc, a, e, m_r, m_c))); };
    for (int i = 0; i < grid; ++i) {
        double s = -1.0 + 2.0 * i / (grid - 1);
        probe(s * unc.Theta, -unc.Psi);
        probe(s * unc.Theta, unc.Psi);
        probe(-unc.Theta, s * unc.Psi);
        probe(unc.Theta, s * unc.Psi);
    }
    for (double a : {-unc.Theta, unc.Theta})
        for (double e : {-unc.Psi, unc.Psi}) probe(a, e);
    return best;
}

BoundGeometry bound_geometry(const EveUncertainty& unc, int M_r, int M_c, int grid) {
    if (!(unc.D >= 0.0) || unc.D >= unc.d_bar) throw Error("uncertainty", "need 0 <= D < d_bar");
    if (unc.Theta < 0.0 || unc.Psi < 0.0) throw Error("uncertainty", "angular bounds must be nonnegative");
    BoundGeometry g;
    g.beta1 = std::sqrt(unc.beta0 * unc.kappa / (1.0 + unc.kappa));
    g.beta2 = std::sqrt(unc.beta0 / (1.0 + unc.kappa));
    const double d_lo = unc.d_bar - unc.D, d_hi = unc.d_bar + unc.D;
    for (int r = 0; r < M_r; ++r)
        for (int c = 0; c < M_c; ++c) {
            int m = r * M_c + c;
            ElementBound e;
            double eps = unc.eps(m);
            if (eps < 0.0) throw Error("uncertainty", "NLoS bounds must be nonnegative");
            e.R_inf = g.beta1 / d_hi;
            e.R_sup = g.beta1 / d_lo;
            e.r_inf = g.beta2 * eps / d_hi;
            e.r_sup = g.beta2 * eps / d_lo;
            e.delta_psi = phase_perturbation_bound(unc, r, c, grid);
            e.R_out = e.R_sup + e.r_sup;
            e.R_inn = e.R_inf - e.r_sup;
            const double dR = e.R_sup - e.R_inf, Rsum = e.R_sup + e.R_inf;
            e.A_act = kPi * e.r_sup * e.r_sup + e.delta_psi * Rsum * (2.0 * e.r_sup + dR) + 2.0 * e.r_sup * dR;
            const double cosd = std::cos(e.delta_psi);
            const double den = 2.0 * (e.R_out * cosd - e.R_inn);
            if (den <= 1e-12 || e.R_inn < 0.0) {
                e.degenerate = true;
                e.R_center = 0.0;
                e.r_tilde_closed_form = e.R_out;
                e.r_tilde = e.R_out;
            } else {
                e.R_center = (e.R_out * e.R_out - e.R_inn * e.R_inn) / den;
                const double Ro = e.R_center;
                e.r_tilde_closed_form = std::sqrt(std::max(0.0, Ro * Ro + e.R_out * e.R_out - 2.0 * Ro * e.R_out * cosd));
                // The closed-form circle misses the inner corners R_inf e^{+-j dpsi} of the
                // sector; the safe radius covers both magnitude extremes at the widest phase.
                const double psi = std::min(e.delta_psi, kPi);
                const cd tilt = std::polar(1.0, psi);
                const double far = std::max(std::abs(e.R_inf * tilt - Ro), std::abs(e.R_sup * tilt - Ro));
                e.r_tilde = std::max(e.r_tilde_closed_form, far + e.r_sup);
            }
            e.A_saf = kPi * e.r_tilde * e.r_tilde;
            g.elem.push_back(e);
        }
    return g;
}

Tightness tightness_metrics(const BoundGeometry& geom) {
    double act = 0, saf = 0, rt2 = 0, ro2 = 0;
    for (const auto& e : geom.elem) {
        act += e.A_act;
        saf += e.A_saf;
        rt2 += e.r_tilde * e.r_tilde;
        ro2 += e.R_center * e.R_center;
    }
    if (!(ro2 > 0.0)) throw Error("metric", "all circumscribed centers are zero; eps_norm undefined");
    Tightness t;
    t.eta = (act == 0.0 && saf == 0.0) ? 0.0 : act / saf;
    t.eps_norm = std::sqrt(rt2) / std::sqrt(ro2);
    return t;
}

RobustChannel robust_channel(const EveUncertainty& unc, const BoundGeometry& geom, int M_r, int M_c) {
    RobustChannel rc;
    CVec a = channel::steer_mris(unc.theta_bar, unc.phi_bar, M_r, M_c, unc.d_R, unc.lambda_c);
    rc.h_nominal.resize(a.size());
    double s = 0.0;
    for (Eigen::Index m = 0; m < a.size(); ++m) {
        const auto& e = geom.elem[static_cast<std::size_t>(m)];
        rc.h_nominal(m) = e.R_center * a(m);
        s += e.r_tilde * e.r_tilde;
    }
    rc.eps_sphere = std::sqrt(s);
    return rc;
}

CVec sample_uncertain_channel(const EveUncertainty& unc, int M_r, int M_c, Rng& rng) {
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    auto sym = [&](double b) { return b == 0.0 ? 0.0 : b * (2.0 * u01(rng) - 1.0); };
    const double dd = sym(unc.D), dt = sym(unc.Theta), dp = sym(unc.Psi);
    const double beta1 = std::sqrt(unc.beta0 * unc.kappa / (1.0 + unc.kappa));
    const double beta2 = std::sqrt(unc.beta0 / (1.0 + unc.kappa));
    CVec a = channel::steer_mris(unc.theta_bar + dt, unc.phi_bar + dp, M_r, M_c, unc.d_R, unc.lambda_c);
    CVec h(a.size());
    for (Eigen::Index m = 0; m < a.size(); ++m) {
        double eps = unc.eps(static_cast<int>(m));
        cd nlos = 0.0;
        if (eps > 0.0) {
            double rad = eps * std::sqrt(u01(rng));
            double ang = 2.0 * kPi * u01(rng);
            nlos = std::polar(rad, ang);
        }
        h(m) = (beta1 * a(m) + beta2 * nlos) / (unc.d_bar + dd);
    }
    return h;
}

EveUncertainty from_config(const scenario::SystemConfig& cfg, const scenario::NodeLayout& layout, int j) {
    auto pv = scenario::polar_from_mris(layout, layout.eve_pos.at(static_cast<std::size_t>(j)));
    EveUncertainty u;
    u.d_bar = pv.d;
    u.theta_bar = pv.azimuth;
    u.phi_bar = pv.elevation;
    u.D = cfg.D_RE;
    u.Theta = cfg.Theta_RE;
    u.Psi = cfg.Psi_RE;
    u.eps_nlos = {cfg.eps_nlos_value()};
    u.kappa = cfg.kappa_RE;
    u.beta0 = cfg.beta0;
    u.d_R = cfg.d_R;
    u.lambda_c = cfg.lambda_c;
    return u;
}

}  // namespace mris::uncertainty
