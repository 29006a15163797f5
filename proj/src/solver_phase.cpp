// SPDX-License-Identifier: Apache-2.0
#include <cmath>

#include "mris/solvers.hpp"
#include "solver_core.hpp"

namespace mris::solvers {

using conic::Affine;
using detail::BeamModel;
using detail::Core;

namespace {

Design with_phase(const Design& d, PhaseBlock which, const CVec& nu) {
    Design o = d;
    (which == PhaseBlock::S1 ? o.theta : o.phi) = nu;
    return o;
}

// u_b as an affine map of the live phase vector.
conic::CVecAffine reflection_affine(const Instance& I, const Design& d, PhaseBlock which, const conic::CVecAffine& nu,
                                    int b) {
    if (which == PhaseBlock::S1) return nu.cwise(surface::equivalent_phase(I.pm, d.phi, b));
    CMat T = d.theta.asDiagonal() * I.pm.E[b].cast<cd>();
    conic::CVecAffine u = nu.lmul(T);
    u.c += d.theta.cwiseProduct(I.pm.e[b].cast<cd>());
    return u;
}

struct InnerModel {
    Core core;
    conic::CVecAffine nu;
    int s = -1;
};

InnerModel build_inner(conic::Model& m, const Instance& I, const Design& d, PhaseBlock which, const Evaluation& an,
                       const Offsets& off, const PddState& st) {
    InnerModel im;
    const int n = static_cast<int>(st.nu.size());
    im.nu = m.add_cvec(n, which == PhaseBlock::S1 ? "theta" : "phi");
    std::vector<BeamModel> beams;
    for (int b = 0; b < I.B; ++b) {
        if (!d.selected(b)) continue;
        conic::CVecAffine u = reflection_affine(I, d, which, im.nu, b);
        CVec u0 = surface::reflection(I.pm, d.theta, d.phi, b);
        BeamModel bm;
        bm.b = b;
        for (int k = 0; k < I.K; ++k) {
            if (d.chi(k, b) != 1) continue;
            CVec g = I.Gn * d.W[k][b];
            bm.streams.push_back({k, u.cwise(g), u0.cwiseProduct(g)});
        }
        CVec g = I.Gn * d.f[b];
        bm.streams.push_back({-1, u.cwise(g), u0.cwiseProduct(g)});
        beams.push_back(std::move(bm));
    }
    detail::CoreOptions opt;
    for (int k = 0; k < I.K; ++k) opt.users.push_back(k);
    // the projection moves nu by up to the outer tolerance; keep the floors strict
    opt.qos_margin = 1e-3;
    opt.sense_margin = 1e-3;
    im.core = detail::add_core(m, I, beams, an, off, opt);
    // |nu_m| <= 1
    for (int i = 0; i < n; ++i) {
        conic::CAffine e = im.nu.entry(i);
        m.soc(Affine(1.0), {e.re, e.im});
    }
    // s >= ||nu - nu_breve||^2
    im.s = m.add_var("penalty");
    conic::CVecAffine diff = im.nu;
    diff.c -= st.nu_breve;
    m.quad_le(diff.realify(), Affine::var(im.s));
    Affine obj = Affine::var(im.core.t) - Affine::var(im.s, 1.0 / (2.0 * st.rho));
    conic::CAffine lh = im.nu.inner(st.lambda_dual);  // lambda^H nu
    obj -= lh.re;
    m.maximize(obj);
    return im;
}

}  // namespace

BlockResult pdd_phase(const Instance& I, Design& d, Offsets& off, PhaseBlock which, PddTrace* trace) {
    BlockResult res;
    res.block = which == PhaseBlock::S1 ? "PDD-theta" : "PDD-phi";
    Evaluation ev0 = evaluate(I, d, off);
    res.t_before = res.t_after = ev0.t;
    if (which == PhaseBlock::S2 && I.N == 0) {
        res.status = conic::Status::Optimal;
        res.accepted = true;
        res.message = "no sliding layer";
        return res;
    }
    PddState st;
    st.nu = which == PhaseBlock::S1 ? d.theta : d.phi;
    st.nu_breve = project_unit_modulus(st.nu, CVec::Zero(st.nu.size()), 1.0);
    st.lambda_dual = CVec::Zero(st.nu.size());
    st.rho = which == PhaseBlock::S1 ? I.rho2 : I.rho3;
    st.threshold = I.pdd_threshold_init;

    Design cur = d;
    bool retried = false;
    res.status = conic::Status::Optimal;
    for (int outer = 0; outer < I.pdd_outer_max; ++outer) {
        double aug = 0;
        for (int inner = 0; inner < I.pdd_inner_max; ++inner) {
            Evaluation an = evaluate(I, cur, off);
            conic::Model m;
            InnerModel im = build_inner(m, I, cur, which, an, off, st);
            auto sol = conic::solve(m);
            ++res.solves;
            res.seconds += sol.seconds;
            if (trace) ++trace->inner_solves;
            if (!sol.ok()) {
                if (!retried) {
                    retried = true;
                    st.rho *= 2.0;
                    continue;
                }
                res.status = sol.status;
                res.message = std::string("inner solve failed: ") + sol.message;
                outer = I.pdd_outer_max;
                break;
            }
            CVec nu_new = sol.value(im.nu);
            aug = sol.objective;
            res.t_solver = sol.x(im.core.t);
            res.certs = detail::realize(im.core.certs, sol.x);
            res.audit_violation = std::max(res.audit_violation, detail::max_violation(res.certs));
            res.lambdas.clear();
            for (int l : im.core.lambdas) res.lambdas.push_back(sol.x(l));
            double step = (nu_new - st.nu).norm();
            st.nu = nu_new;
            st.nu_breve = project_unit_modulus(st.nu, st.lambda_dual, st.rho);
            cur = with_phase(cur, which, st.nu);
            if (step <= I.tol_pdd_inner) break;
        }
        if (res.status != conic::Status::Optimal && res.status != conic::Status::Inaccurate) break;
        CVec gap = st.nu - st.nu_breve;
        double r_inf = gap.cwiseAbs().maxCoeff();
        if (r_inf <= st.threshold)
            st.lambda_dual += gap / st.rho;
        else
            st.rho *= I.varpi1;
        st.threshold *= I.varpi1;
        if (trace) {
            trace->residual_inf.push_back(r_inf);
            trace->objective.push_back(aug);
            trace->t_eval.push_back(evaluate(I, with_phase(d, which, st.nu_breve), off).t);
        }
        if (gap.norm() <= I.tol_pdd_outer) break;
    }
    CVec final_gap = st.nu - st.nu_breve;
    double rinf = final_gap.size() ? final_gap.cwiseAbs().maxCoeff() : 0.0;
    if (trace) trace->final_residual_inf = rinf;
    Design nd = with_phase(d, which, st.nu_breve);
    Evaluation ev1 = evaluate(I, nd, off);
    if (ev1.feasible && ev1.t >= res.t_before - 1e-9) {
        d = nd;
        res.accepted = true;
        res.t_after = ev1.t;
    } else {
        res.message += ev1.feasible ? "; rejected: evaluated t decreased" : "; rejected: " + ev1.violation;
    }
    res.message += "; residual_inf=" + std::to_string(rinf);
    return res;
}

}  // namespace mris::solvers
