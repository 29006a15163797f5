// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <map>

#include "mris/solvers.hpp"
#include "solver_core.hpp"

namespace mris::solvers {

using conic::Affine;
using detail::BeamModel;
using detail::Core;
using detail::Stream;

namespace {

struct P4Model {
    Core core;
    std::map<std::pair<int, int>, conic::CVecAffine> w;  // (k, b)
    std::map<int, conic::CVecAffine> f;
};

constexpr double kAnFloor = 1e-4;
constexpr double kAnSeedPower = 0.1;

std::vector<int> all_users(const Instance& I) {
    std::vector<int> u;
    for (int k = 0; k < I.K; ++k) u.push_back(k);
    return u;
}

P4Model build_p4(conic::Model& m, const Instance& I, const Design& d, const Evaluation& an, const Offsets& off,
                 bool restore) {
    P4Model pm;
    std::vector<BeamModel> beams;
    for (int b = 0; b < I.B; ++b) {
        if (!d.selected(b)) continue;
        CVec u = surface::reflection(I.pm, d.theta, d.phi, b);
        CMat T = u.asDiagonal() * I.Gn;
        BeamModel bm;
        bm.b = b;
        std::vector<Affine> pw;
        for (int k = 0; k < I.K; ++k) {
            if (d.chi(k, b) != 1) continue;
            auto w = m.add_cvec(I.L, "w_k" + std::to_string(k) + "b" + std::to_string(b));
            pm.w.emplace(std::make_pair(k, b), w);
            bm.streams.push_back({k, w.lmul(T), T * d.W[k][b]});
            for (auto& a : w.realify()) pw.push_back(a);
        }
        auto f = m.add_cvec(I.L, "f_b" + std::to_string(b));
        pm.f.emplace(b, f);
        bm.streams.push_back({-1, f.lmul(T), T * d.f[b]});
        for (auto& a : f.realify()) pw.push_back(a);
        m.quad_le(pw, Affine(1.0));  // per-pattern power
        beams.push_back(std::move(bm));
    }
    detail::CoreOptions opt;
    opt.users = all_users(I);
    opt.restore = restore;
    pm.core = detail::add_core(m, I, beams, an, off, opt);
    return pm;
}

}  // namespace

// AN direction for a pattern whose AN has vanished: the Eves' effective rows
// projected away from the rows of the users on the pattern.
CVec seed_an(const Instance& I, const Design& d, int b, double power) {
    CVec u = surface::reflection(I.pm, d.theta, d.phi, b);
    std::vector<CVec> users;
    for (int k = 0; k < I.K; ++k)
        if (d.chi(k, b) == 1) users.push_back(channel::effective_channel(I.h_user[k], u, I.Gn).conjugate());
    CMat Q;
    if (!users.empty()) {
        CMat U(I.L, static_cast<Eigen::Index>(users.size()));
        for (std::size_t i = 0; i < users.size(); ++i) U.col(static_cast<Eigen::Index>(i)) = users[i];
        Eigen::HouseholderQR<CMat> qr(U);
        Q = qr.householderQ() * CMat::Identity(I.L, std::min<Eigen::Index>(U.cols(), I.L));
    }
    CVec f = CVec::Zero(I.L);
    for (int j = 0; j < I.J; ++j) {
        CVec e = channel::effective_channel(I.hbar[j], u, I.Gn).conjugate();
        if (Q.size()) e -= Q * (Q.adjoint() * e);
        f += e;
    }
    if (!(f.norm() > 0)) return f;
    return f / f.norm() * std::sqrt(power);
}

namespace {

struct Attempt {
    bool solved = false;
    Design design;
    Evaluation ev;
    conic::Solution sol;
    std::vector<Certificate> certs;
    std::vector<double> lambdas;
    double t_solver = 0;
};

Attempt p4_attempt(const Instance& I, const Design& d, const Design& anchor, const Offsets& off) {
    Attempt a;
    Evaluation an = evaluate(I, anchor, off);
    conic::Model m;
    P4Model pm = build_p4(m, I, anchor, an, off, false);
    m.maximize(Affine::var(pm.core.t));
    a.sol = conic::solve(m);
    if (!a.sol.ok()) return a;
    a.solved = true;
    a.t_solver = a.sol.x(pm.core.t);
    a.certs = detail::realize(pm.core.certs, a.sol.x);
    for (int l : pm.core.lambdas) a.lambdas.push_back(a.sol.x(l));
    Design nd = d;
    for (const auto& [kb, w] : pm.w) nd.W[kb.first][kb.second] = a.sol.value(w);
    for (const auto& [b, f] : pm.f) nd.f[b] = a.sol.value(f);
    // keep the per-pattern budget exact under solver round-off
    for (int b = 0; b < I.B; ++b) {
        if (!nd.selected(b)) continue;
        double p = nd.f[b].squaredNorm();
        for (int k = 0; k < I.K; ++k)
            if (nd.chi(k, b) == 1) p += nd.W[k][b].squaredNorm();
        if (p > 1.0) {
            double s = 1.0 / std::sqrt(p);
            nd.f[b] *= s;
            for (int k = 0; k < I.K; ++k)
                if (nd.chi(k, b) == 1) nd.W[k][b] *= s;
        }
    }
    a.design = nd;
    a.ev = evaluate(I, nd, off);
    return a;
}

}  // namespace

BlockResult solve_beamformer(const Instance& I, Design& d, Offsets& off) {
    BlockResult res;
    res.block = "P4";
    Evaluation ev0 = evaluate(I, d, off);
    res.t_before = ev0.t;
    res.t_after = res.t_before;
    if (off.any()) {
        res.restoration = true;
        auto build = [&](conic::Model& m, bool restore) { return build_p4(m, I, d, ev0, off, restore); };
        if (!detail::restore_offsets(I, off, build, res.solves, res.seconds)) {
            res.message = "restoration solve failed";
            return res;
        }
    }
    std::vector<Design> anchors{d};
    if (I.J > 0) {
        // the AN lower bounds are flat at f = 0, so also expand around a seeded AN
        Design seeded = d;
        bool any = false;
        for (int b = 0; b < I.B; ++b)
            if (d.selected(b) && d.f[b].squaredNorm() < kAnFloor) {
                seeded.f[b] = seed_an(I, d, b, kAnSeedPower);
                any = any || seeded.f[b].squaredNorm() > 0;
            }
        if (any) anchors.push_back(seeded);
    }
    Attempt best;
    for (const auto& anchor : anchors) {
        Attempt a = p4_attempt(I, d, anchor, off);
        ++res.solves;
        res.seconds += a.sol.seconds;
        if (!a.solved) {
            if (!best.solved) best.sol = a.sol;
            continue;
        }
        bool better = !best.solved || (a.ev.feasible && !best.ev.feasible) ||
                      (a.ev.feasible == best.ev.feasible && a.ev.t > best.ev.t);
        if (better) best = std::move(a);
    }
    res.status = best.sol.status;
    res.message = best.sol.message;
    if (!best.solved) {
        if (best.sol.status == conic::Status::Infeasible) res.message = "scenario infeasible for P4";
        return res;
    }
    res.t_solver = best.t_solver;
    res.certs = best.certs;
    res.audit_violation = detail::max_violation(res.certs);
    res.lambdas = best.lambdas;
    if (best.ev.feasible && (res.restoration || best.ev.t >= res.t_before - 1e-9)) {
        d = best.design;
        res.accepted = true;
        res.t_after = best.ev.t;
    } else {
        res.message += best.ev.feasible ? "; rejected: evaluated t decreased" : "; rejected: " + best.ev.violation;
    }
    return res;
}

void refresh_candidates(const Instance& I, Design& d, int rounds) {
    Offsets none = zero_offsets(I);
    for (int b = 0; b < I.B; ++b) {
        const bool sel = d.selected(b);
        CVec u = surface::reflection(I.pm, d.theta, d.phi, b);
        CMat T = u.asDiagonal() * I.Gn;
        for (int k = 0; k < I.K; ++k) {
            if (d.chi(k, b) == 1) continue;
            for (int r = 0; r < rounds; ++r) {
                Design dp = d;
                dp.chi.row(k).setZero();
                dp.chi(k, b) = 1;
                Evaluation an = evaluate(I, dp, none);
                conic::Model m;
                BeamModel bm;
                bm.b = b;
                std::vector<Affine> pw;
                for (int i = 0; i < I.K; ++i) {
                    if (i == k || d.chi(i, b) != 1) continue;
                    CVec X = T * d.W[i][b];
                    bm.streams.push_back({i, conic::CVecAffine(X), X});
                    for (Eigen::Index l = 0; l < d.W[i][b].size(); ++l) {
                        pw.emplace_back(d.W[i][b](l).real());
                        pw.emplace_back(d.W[i][b](l).imag());
                    }
                }
                auto w = m.add_cvec(I.L, "w_cand");
                bm.streams.push_back({k, w.lmul(T), T * d.W[k][b]});
                for (auto& a : w.realify()) pw.push_back(a);
                conic::CVecAffine f(CVec(d.f[b]));
                if (!sel) f = m.add_cvec(I.L, "f_cand");
                bm.streams.push_back({-1, f.lmul(T), T * d.f[b]});
                for (auto& a : f.realify()) pw.push_back(a);
                m.quad_le(pw, Affine(1.0));
                detail::CoreOptions opt;
                opt.users = {k};
                opt.sensing = false;
                Core core = detail::add_core(m, I, {bm}, an, none, opt);
                m.maximize(Affine::var(core.t));
                auto sol = conic::solve(m);
                if (!sol.ok()) break;
                double p = 0;
                for (const auto& a : pw) p += std::pow(a.eval(sol.x), 2);
                double s = p > 1.0 ? 1.0 / std::sqrt(p) : 1.0;
                d.W[k][b] = s * sol.value(w);
                if (!sel) d.f[b] = s * sol.value(f);
            }
        }
    }
}

}  // namespace mris::solvers
