// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "mris/metrics.hpp"
#include "mris/solvers.hpp"

namespace mris::solvers {

std::vector<double> max_sensing_gain(const Instance& I, const Design& d) {
    std::vector<double> g;
    for (int j = 0; j < I.J; ++j) {
        double best = 0;
        for (int b = 0; b < I.B; ++b) {
            CVec u = surface::reflection(I.pm, d.theta, d.phi, b);
            // full budget on the matched beam: ||s_j G^T diag(u) conj(h)||^2
            CVec row = channel::effective_channel(I.hbar[j], u, I.Gn) * I.eve_scale[j];
            best = std::max(best, row.squaredNorm());
        }
        g.push_back(best);
    }
    return g;
}

Instance make_instance(const scenario::SystemConfig& cfg, const channel::ChannelSet& ch, const surface::PatternMap& pm,
                       const std::vector<uncertainty::RobustChannel>& eves) {
    Instance I;
    I.K = cfg.K;
    I.J = static_cast<int>(eves.size());
    I.B = pm.B;
    I.L = cfg.L;
    I.M = cfg.M();
    I.N = cfg.N();
    I.pm = pm;
    I.P_max = cfg.P_max;
    const double sU = std::sqrt(cfg.sigma2_U);
    I.Gn = ch.G * (std::sqrt(cfg.P_max) / sU);
    I.h_user = ch.h_user;
    for (int j = 0; j < I.J; ++j) {
        const auto& e = eves[static_cast<std::size_t>(j)];
        double s = e.h_nominal.norm() / std::sqrt(static_cast<double>(I.M));
        if (!(s > 0)) s = 1.0;
        I.eve_scale.push_back(s);
        I.hbar.push_back(e.h_nominal / s);
        I.eps.push_back(e.eps_sphere / s);
        // an empty list is filled at initialization from max_sensing_gain
        if (!cfg.Gamma_sense.empty())
            I.gamma_sense.push_back(
                (cfg.Gamma_sense.size() == 1 ? cfg.Gamma_sense[0] : cfg.Gamma_sense[static_cast<std::size_t>(j)]) /
                cfg.sigma2_U);
    }
    I.gamma_sense_scale = cfg.Gamma_sense_scale;
    I.sigma2_E = cfg.sigma2_E / cfg.sigma2_U;
    for (int k = 0; k < I.K; ++k) I.gamma_user.push_back(cfg.gamma_user(k));
    I.leakage = cfg.leakage_model;
    I.rho1 = cfg.rho1;
    I.rho2 = cfg.rho2_init;
    I.rho3 = cfg.rho3_init;
    I.varpi1 = cfg.varpi1;
    I.bigM1 = cfg.bigM1;
    I.bigM2 = cfg.bigM2;
    I.tol_pdd_inner = cfg.tol_pdd_inner;
    I.tol_pdd_outer = cfg.tol_pdd_outer;
    I.pdd_threshold_init = cfg.pdd_threshold_init;
    I.pdd_outer_max = cfg.pdd_outer_max;
    I.pdd_inner_max = cfg.pdd_inner_max;
    I.assign_rounds = cfg.assign_rounds;
    I.candidate_rounds = cfg.candidate_rounds;
    I.assign_local_search = cfg.assign_local_search;
    return I;
}

namespace {

Design rescale(const Design& d, double s) {
    Design o = d;
    for (auto& row : o.W)
        for (auto& w : row) w *= s;
    for (auto& f : o.f) f *= s;
    return o;
}

}  // namespace

Design to_solver_units(const Design& d, double P_max) { return rescale(d, 1.0 / std::sqrt(P_max)); }
Design to_physical_units(const Design& d, double P_max) { return rescale(d, std::sqrt(P_max)); }

Offsets zero_offsets(const Instance& inst) {
    return {RVec::Zero(inst.K), RMat::Zero(inst.J, inst.B)};
}

namespace {

std::vector<CVec> beam_slice(const Design& d, int b) {
    std::vector<CVec> out;
    for (int k = 0; k < d.K(); ++k) out.push_back(d.W[k][b]);
    return out;
}

}  // namespace

PairEve pair_eve(const Instance& I, const Design& d, int k, int b, const CVec& u_b) {
    PairEve pe;
    CVec Xk = u_b.cwiseProduct(I.Gn * d.W[k][b]);
    CVec Xf = u_b.cwiseProduct(I.Gn * d.f[b]);
    for (int j = 0; j < I.J; ++j) {
        const double s = I.eve_scale[j];
        double leak = robust::worst_leakage(I.hbar[j], s * Xk, I.eps[j]);
        robust::QuadraticForm q = robust::exact_form(I.hbar[j], s * Xf);
        for (int i = 0; i < I.K; ++i)
            if (i != k && d.chi(i, b) == 1) q += robust::exact_form(I.hbar[j], s * u_b.cwiseProduct(I.Gn * d.W[i][b]));
        double imin = std::max(0.0, robust::min_over_ball(q, I.eps[j]).value);
        pe.leak_max.push_back(leak);
        pe.interf_min.push_back(imin);
        pe.v_need.push_back(std::log1p(leak / (imin + I.sigma2_E)));
    }
    return pe;
}

Evaluation evaluate(const Instance& I, const Design& d, const Offsets& off) {
    Evaluation ev;
    ev.rate = RVec::Zero(I.K);
    ev.v = RVec::Zero(I.K);
    ev.v_need = RMat::Zero(I.K, I.J);
    ev.leak_max = RMat::Zero(I.K, I.J);
    ev.interf_min = RMat::Zero(I.K, I.J);
    ev.sense_min = RMat::Zero(I.J, I.B);
    ev.power = RVec::Zero(I.B);
    ev.qos_deficit = RVec::Zero(I.K);
    ev.sense_deficit = RMat::Zero(I.J, I.B);
    ev.z = RMat::Ones(I.K, I.B);
    ev.mu = CMat::Zero(I.K, I.B);
    const double tol = 1e-6;
    std::ostringstream why;

    std::vector<CVec> u(I.B);
    for (int b = 0; b < I.B; ++b) u[b] = surface::reflection(I.pm, d.theta, d.phi, b);

    ev.t = std::numeric_limits<double>::infinity();
    for (int k = 0; k < I.K; ++k) {
        int b = d.beam_of(k);
        if (b < 0) throw Error("assignment", "user without pattern");
        auto Wb = beam_slice(d, b);
        Eigen::VectorXi chi_b = d.chi.col(b);
        CVec row = channel::effective_channel(I.h_user[k], u[b], I.Gn);
        auto ur = metrics::user_rate(row, Wb, d.f[b], chi_b, k, 1.0);
        ev.rate(k) = ur.rate;
        ev.z(k, b) = wmmse::update_z(ur.sinr);
        ev.mu(k, b) = wmmse::update_mu(row, Wb, d.f[b], chi_b, k, 1.0);
        auto pe = pair_eve(I, d, k, b, u[b]);
        double v = 0;
        for (int j = 0; j < I.J; ++j) {
            ev.leak_max(k, j) = pe.leak_max[j];
            ev.interf_min(k, j) = pe.interf_min[j];
            ev.v_need(k, j) = pe.v_need[j];
            v = std::max(v, pe.v_need[j]);
        }
        ev.v(k) = v;
        ev.t = std::min(ev.t, ur.rate - v);
        double need = I.gamma_user[k] - (off.qos.size() ? off.qos(k) : 0.0);
        ev.qos_deficit(k) = std::max(0.0, I.gamma_user[k] - ur.rate);
        if (ur.rate < need - tol) {
            ev.feasible = false;
            why << "qos user " << k << "; ";
        }
    }
    for (int b = 0; b < I.B; ++b) {
        if (!d.selected(b)) continue;
        double p = d.f[b].squaredNorm();
        for (int k = 0; k < I.K; ++k)
            if (d.chi(k, b) == 1) p += d.W[k][b].squaredNorm();
        ev.power(b) = p;
        if (p > 1.0 + tol) {
            ev.feasible = false;
            why << "power pattern " << b << "; ";
        }
        for (int j = 0; j < I.J; ++j) {
            const double s = I.eve_scale[j];
            robust::QuadraticForm q = robust::exact_form(I.hbar[j], s * u[b].cwiseProduct(I.Gn * d.f[b]));
            for (int k = 0; k < I.K; ++k)
                if (d.chi(k, b) == 1) q += robust::exact_form(I.hbar[j], s * u[b].cwiseProduct(I.Gn * d.W[k][b]));
            double smin = std::max(0.0, robust::min_over_ball(q, I.eps[j]).value);
            ev.sense_min(j, b) = smin;
            ev.sense_deficit(j, b) = std::max(0.0, I.gamma_sense[j] - smin);
            double need = I.gamma_sense[j] - (off.sense.size() ? off.sense(j, b) : 0.0);
            if (smin < need - tol * std::max(1.0, I.gamma_sense[j])) {
                ev.feasible = false;
                why << "sensing eve " << j << " pattern " << b << "; ";
            }
        }
    }
    ev.violation = why.str();
    return ev;
}

double certificate_violation(const Certificate& c) {
    if (c.sense == robust::Sense::Upper) return robust::max_over_ball(c.q, c.eps).value - c.rhs;
    return c.rhs - robust::min_over_ball(c.q, c.eps).value;
}

CVec project_unit_modulus(const CVec& nu, const CVec& lambda_dual, double rho) {
    if (!(rho > 0)) throw Error("domain", "project_unit_modulus: rho must be positive");
    CVec out(nu.size());
    for (Eigen::Index i = 0; i < nu.size(); ++i) {
        cd a = nu(i) / rho + lambda_dual(i);
        out(i) = std::abs(a) > 0 ? std::polar(1.0, std::arg(a)) : cd(1.0, 0.0);
    }
    return out;
}

}  // namespace mris::solvers
