// SPDX-License-Identifier: Apache-2.0
#include "solver_core.hpp"

#include <cmath>

namespace mris::solvers::detail {

using conic::Affine;
using conic::CAffine;

namespace {

std::vector<Affine> scaled_parts(const CAffine& a, double s) {
    return {s * a.re, s * a.im};
}

}  // namespace

Core add_core(conic::Model& m, const Instance& I, const std::vector<BeamModel>& beams, const Evaluation& an,
              const Offsets& off, const CoreOptions& opt) {
    Core core;
    core.t = m.add_var("t");
    core.qos_slack.assign(static_cast<std::size_t>(I.K), -1);
    for (const auto& bm : beams) {
        const int b = bm.b;
        for (const auto& st : bm.streams) {
            const int k = st.user;
            if (k < 0 || std::find(opt.users.begin(), opt.users.end(), k) == opt.users.end()) continue;
            const std::string tag = "k" + std::to_string(k) + "b" + std::to_string(b);
            // surrogate rate y_k as linear part minus a convex quadratic
            const double z = an.z(k, b);
            const cd mu = an.mu(k, b);
            const double zt = std::log(z) - z - z * std::norm(mu) + 1.0;
            CAffine Ak = st.X.inner(I.h_user[k]);
            Affine lin = 2.0 * z * (mu.real() * Ak.re + mu.imag() * Ak.im) + Affine(zt);
            std::vector<Affine> quad;
            const double w = std::sqrt(z) * std::abs(mu);
            for (const auto& s2 : bm.streams)
                for (auto& p : scaled_parts(s2.X.inner(I.h_user[k]), w)) quad.push_back(p);

            int v = m.add_var("v_" + tag);
            core.v.push_back(v);
            m.ge(Affine::var(v));
            m.quad_le(quad, lin - Affine::var(core.t) - Affine::var(v));
            // QoS
            Affine qrhs = lin - Affine(I.gamma_user[k] + opt.qos_margin);
            if (opt.restore && off.qos(k) > 0) {
                int sl = m.add_var("qos_slack_" + tag);
                core.qos_slack[static_cast<std::size_t>(k)] = sl;
                m.ge(Affine::var(sl));
                m.le(Affine::var(sl), Affine(off.qos(k)));
                qrhs += Affine::var(sl);
                core.slack += Affine::var(sl);
            } else {
                qrhs += Affine(off.qos(k));
            }
            m.quad_le(quad, qrhs);

            // Eves
            for (int j = 0; j < I.J; ++j) {
                const double s = I.eve_scale[j];
                const std::string tj = tag + "j" + std::to_string(j);
                conic::CVecAffine Xe = cd(s) * st.X;
                CVec Xe0 = s * st.X0;
                int vbar = m.add_var("vbar_" + tj);
                // interference floor (lower LMI)
                robust::ParamForm qi(robust::QuadraticForm::zero(I.M));
                for (const auto& s2 : bm.streams) {
                    if (s2.user == k) continue;
                    qi += robust::signal_taylor_form(I.hbar[j], CVec(s * s2.X0), cd(s) * s2.X);
                }
                int l10 = m.add_var("lambda10_" + tj);
                core.lambdas.push_back(l10);
                Affine rhs10 = Affine::var(vbar) - Affine(I.sigma2_E);
                auto blk10 = robust::assemble_lmi(qi, rhs10, robust::Sense::Lower, I.eps[j], l10);
                blk10.tag = "C10_" + tj;
                robust::add_block(m, blk10);
                core.certs.push_back({qi, {}, {}, rhs10, {}, false, robust::Sense::Lower, I.eps[j], blk10.tag});

                const double vt = an.v_need(k, j);
                if (I.leakage == scenario::LeakageModel::Taylor) {
                    robust::ParamForm ql = robust::signal_taylor_form(I.hbar[j], Xe0, Xe);
                    double vbt = an.interf_min(k, j) + I.sigma2_E;
                    Affine rhs9 = robust::sca_leak_budget_expr(vt, vbt, v, vbar);
                    int l9 = m.add_var("lambda9_" + tj);
                    core.lambdas.push_back(l9);
                    auto blk9 = robust::assemble_lmi(ql, rhs9, robust::Sense::Upper, I.eps[j], l9);
                    blk9.tag = "C9_" + tj;
                    robust::add_block(m, blk9);
                    core.certs.push_back({ql, {}, {}, rhs9, {}, false, robust::Sense::Upper, I.eps[j], blk9.tag});
                    continue;
                }
                int g = m.add_var("g_" + tj);
                // g <= e^v - 1 through its tangent at the anchor
                double e = std::exp(vt);
                m.le(Affine::var(g), Affine(e * (1.0 - vt) - 1.0) + Affine::var(v, e));
                if (I.leakage == scenario::LeakageModel::Schur) {
                    int l9 = m.add_var("lambda9_" + tj);
                    core.lambdas.push_back(l9);
                    auto blk9 = robust::assemble_ratio_lmi(Xe, I.hbar[j], I.eps[j], g, vbar, l9);
                    blk9.tag = "C9_" + tj;
                    robust::add_block(m, blk9);
                } else {
                    int p = m.add_var("p_" + tj), q = m.add_var("q_" + tj);
                    CAffine hx = Xe.inner(I.hbar[j]);
                    m.soc(Affine::var(p), {hx.re, hx.im});
                    std::vector<Affine> xr = Xe.realify();
                    for (auto& a : xr) a *= I.eps[j];
                    m.soc(Affine::var(q), xr);
                    m.rsoc({Affine::var(p) + Affine::var(q)}, Affine::var(vbar), Affine::var(g));
                }
                PendingCert pc;
                pc.leak_X = Xe;
                pc.hbar = I.hbar[j];
                pc.rhs = Affine::var(g);
                pc.rhs_b = Affine::var(vbar);
                pc.product = true;
                pc.sense = robust::Sense::Upper;
                pc.eps = I.eps[j];
                pc.tag = "C9_" + tj;
                core.certs.push_back(pc);
            }
        }
        if (!opt.sensing) continue;
        for (int j = 0; j < I.J; ++j) {
            const double s = I.eve_scale[j];
            const std::string tj = "b" + std::to_string(b) + "j" + std::to_string(j);
            robust::ParamForm qs(robust::QuadraticForm::zero(I.M));
            for (const auto& s2 : bm.streams)
                qs += robust::signal_taylor_form(I.hbar[j], CVec(s * s2.X0), cd(s) * s2.X);
            Affine rhs5(I.gamma_sense[j] * (1.0 + opt.sense_margin));
            if (opt.restore && off.sense(j, b) > 0) {
                int sl = m.add_var("sense_slack_" + tj);
                core.sense_slack.push_back(sl);
                core.sense_slack_index.emplace_back(j, b);
                m.ge(Affine::var(sl));
                m.le(Affine::var(sl), Affine(off.sense(j, b)));
                rhs5 -= Affine::var(sl);
                core.slack += Affine::var(sl, 1.0 / std::max(1e-12, I.gamma_sense[j]));
            } else {
                rhs5 -= Affine(off.sense(j, b));
            }
            int l5 = m.add_var("lambda5_" + tj);
            core.lambdas.push_back(l5);
            auto blk5 = robust::assemble_lmi(qs, rhs5, robust::Sense::Lower, I.eps[j], l5);
            blk5.tag = "C5_" + tj;
            robust::add_block(m, blk5);
            core.certs.push_back({qs, {}, {}, rhs5, {}, false, robust::Sense::Lower, I.eps[j], blk5.tag});
        }
    }
    return core;
}

std::vector<Certificate> realize(const std::vector<PendingCert>& pending, const RVec& x) {
    std::vector<Certificate> out;
    for (const auto& p : pending) {
        Certificate c;
        c.sense = p.sense;
        c.eps = p.eps;
        c.tag = p.tag;
        if (p.product) {
            c.q = robust::exact_form(p.hbar, p.leak_X.eval(x));
            c.rhs = p.rhs.eval(x) * p.rhs_b.eval(x);
        } else {
            c.q = p.q->at(x);
            c.rhs = p.rhs.eval(x);
        }
        out.push_back(std::move(c));
    }
    return out;
}

double max_violation(const std::vector<Certificate>& certs) {
    double v = 0;
    for (const auto& c : certs) {
        double scale = std::max({1.0, std::abs(c.rhs), c.q.A.norm() * c.eps * c.eps, std::abs(c.q.c)});
        v = std::max(v, certificate_violation(c) / scale);
    }
    return v;
}

}  // namespace mris::solvers::detail
