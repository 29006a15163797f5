// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "mris/metrics.hpp"
#include "mris/solvers.hpp"
#include "solver_core.hpp"

namespace mris::solvers {

using conic::Affine;

namespace {

cd row_times(const CVec& row, const CVec& w) { return (row.array() * w.array()).sum(); }

// Fixed-beamformer data of user k served on pattern b.
struct PairData {
    CVec row;                       // effective channel of user k on b
    double z = 1;
    cd mu = 0;
    double y_const = 0;             // surrogate with no co-pattern users
    std::vector<double> y_coef;     // per co-user i: coefficient of chi_{i,b}
    std::vector<double> leak_max;   // per Eve, worst case of its own stream
    std::vector<double> v_anchor;   // per Eve, v_need with the current co-users
    std::vector<std::vector<robust::QuadraticForm>> q;  // [j][i] exact form of user i's stream on b
    std::vector<robust::QuadraticForm> qf;              // [j] AN form on b
};

PairData pair_data(const Instance& I, const Design& d, int k, int b, const CVec& u) {
    PairData p;
    p.row = channel::effective_channel(I.h_user[k], u, I.Gn);
    Design dp = d;
    dp.chi.row(k).setZero();
    dp.chi(k, b) = 1;
    std::vector<CVec> Wb;
    for (int i = 0; i < I.K; ++i) Wb.push_back(d.W[i][b]);
    Eigen::VectorXi chi_b = dp.chi.col(b);
    auto ur = metrics::user_rate(p.row, Wb, d.f[b], chi_b, k, 1.0);
    p.z = wmmse::update_z(ur.sinr);
    p.mu = wmmse::update_mu(p.row, Wb, d.f[b], chi_b, k, 1.0);
    const double zm = p.z * std::norm(p.mu);
    const cd hw = row_times(p.row, d.W[k][b]);
    p.y_const = 2.0 * p.z * (std::conj(p.mu) * hw).real() + std::log(p.z) - p.z + 1.0 -
                zm * (std::norm(hw) + std::norm(row_times(p.row, d.f[b])) + 1.0);
    p.y_coef.assign(static_cast<std::size_t>(I.K), 0.0);
    for (int i = 0; i < I.K; ++i)
        if (i != k) p.y_coef[i] = -zm * std::norm(row_times(p.row, d.W[i][b]));
    auto pe = pair_eve(I, dp, k, b, u);
    p.v_anchor = pe.v_need;
    for (int j = 0; j < I.J; ++j) {
        const double s = I.eve_scale[j];
        p.leak_max.push_back(robust::worst_leakage(I.hbar[j], s * u.cwiseProduct(I.Gn * d.W[k][b]), I.eps[j]));
        std::vector<robust::QuadraticForm> qj;
        for (int i = 0; i < I.K; ++i) qj.push_back(robust::exact_form(I.hbar[j], s * u.cwiseProduct(I.Gn * d.W[i][b])));
        p.q.push_back(std::move(qj));
        p.qf.push_back(robust::exact_form(I.hbar[j], s * u.cwiseProduct(I.Gn * d.f[b])));
    }
    return p;
}

struct Vars {
    std::vector<std::vector<int>> chi;  // [k][b]
    int t = -1;
};

double big_m(const Instance& I, const std::vector<std::vector<PairData>>& pd, double configured) {
    if (configured > 0) return configured;
    double m_rate = 0, y_min = 0, v_max = 0;
    for (int k = 0; k < I.K; ++k)
        for (int b = 0; b < I.B; ++b) {
            const auto& p = pd[k][b];
            m_rate = std::max(m_rate, std::log1p(p.row.squaredNorm()));
            double y = p.y_const;
            for (double c : p.y_coef) y += std::min(0.0, c);
            y_min = std::min(y_min, y);
            for (double l : p.leak_max) v_max = std::max(v_max, std::log1p(l / I.sigma2_E));
        }
    return std::max({m_rate + 1.0, v_max - y_min + 1.0, -y_min + 1.0});
}

}  // namespace

BlockResult solve_assignment(const Instance& I, Design& d, Offsets& off) {
    BlockResult res;
    res.block = "P7";
    Evaluation ev0 = evaluate(I, d, off);
    res.t_before = res.t_after = ev0.t;
    if (I.B == 1) {
        res.status = conic::Status::Optimal;
        res.accepted = true;
        res.message = "single pattern";
        return res;
    }
    std::vector<CVec> u(I.B);
    for (int b = 0; b < I.B; ++b) u[b] = surface::reflection(I.pm, d.theta, d.phi, b);
    std::vector<std::vector<PairData>> pd(static_cast<std::size_t>(I.K));
    for (int k = 0; k < I.K; ++k)
        for (int b = 0; b < I.B; ++b) pd[k].push_back(pair_data(I, d, k, b, u[b]));
    const double M1 = big_m(I, pd, I.bigM1), M2 = big_m(I, pd, I.bigM2);

    // Start the penalty anchor at the centre so the first round is the plain relaxation.
    RMat anchor = RMat::Constant(I.K, I.B, 1.0 / I.B);
    RMat chi_val = anchor;
    double last_obj = -std::numeric_limits<double>::infinity();
    res.status = conic::Status::Optimal;
    for (int round = 0; round < std::max(1, I.assign_rounds); ++round) {
        conic::Model m;
        Vars vs;
        vs.t = m.add_var("t");
        vs.chi.assign(static_cast<std::size_t>(I.K), std::vector<int>(static_cast<std::size_t>(I.B)));
        for (int k = 0; k < I.K; ++k) {
            Affine row_sum;
            for (int b = 0; b < I.B; ++b) {
                int c = m.add_var("chi_k" + std::to_string(k) + "b" + std::to_string(b));
                vs.chi[k][b] = c;
                m.ge(Affine::var(c));
                m.le(Affine::var(c), Affine(1.0));
                row_sum += Affine::var(c);
            }
            m.eq(row_sum - Affine(1.0));
        }
        std::vector<int> sel(static_cast<std::size_t>(I.B));
        for (int b = 0; b < I.B; ++b) {
            sel[b] = m.add_var("sel_b" + std::to_string(b));
            m.le(Affine::var(sel[b]), Affine(1.0));
            Affine power(d.f[b].squaredNorm());
            for (int k = 0; k < I.K; ++k) {
                m.ge(Affine::var(sel[b]) - Affine::var(vs.chi[k][b]));
                power += Affine::var(vs.chi[k][b], d.W[k][b].squaredNorm());
            }
            m.le(power, Affine(1.0));
        }
        for (int k = 0; k < I.K; ++k) {
            Affine qos_sum, sec_sum;
            for (int b = 0; b < I.B; ++b) {
                const auto& p = pd[k][b];
                const std::string tag = "k" + std::to_string(k) + "b" + std::to_string(b);
                const Affine chi = Affine::var(vs.chi[k][b]);
                Affine y(p.y_const);
                for (int i = 0; i < I.K; ++i)
                    if (i != k) y += Affine::var(vs.chi[i][b], p.y_coef[i]);
                // QoS through varsigma
                int sg = m.add_var("varsigma_" + tag);
                m.ge(Affine::var(sg));
                m.le(Affine::var(sg), M1 * chi);
                m.le(Affine::var(sg), y + M1 * (Affine(1.0) - chi));
                qos_sum += Affine::var(sg);
                // secrecy through r
                int v = m.add_var("v_" + tag);
                m.ge(Affine::var(v));
                int r = m.add_var("r_" + tag);
                m.ge(Affine::var(r) + M2 * chi);
                m.le(Affine::var(r), M2 * chi);
                m.le(Affine::var(r), y - Affine::var(v) + M2 * (Affine(1.0) - chi));
                sec_sum += Affine::var(r);
                for (int j = 0; j < I.J; ++j) {
                    const std::string tj = tag + "j" + std::to_string(j);
                    int vbar = m.add_var("vbar_" + tj);
                    int g = m.add_var("g_" + tj);
                    const double vt = p.v_anchor[j];
                    const double e = std::exp(vt);
                    m.le(Affine::var(g), Affine(e * (1.0 - vt) - 1.0) + Affine::var(v, e));
                    // worst-case leakage of fixed beamformers is a constant
                    m.rsoc({Affine(std::sqrt(p.leak_max[j]))}, Affine::var(vbar), Affine::var(g));
                    robust::ParamForm qi(p.qf[j]);
                    for (int i = 0; i < I.K; ++i)
                        if (i != k) qi.terms.emplace_back(vs.chi[i][b], p.q[j][i]);
                    int l10 = m.add_var("lambda10_" + tj);
                    auto blk = robust::assemble_lmi(qi, Affine::var(vbar) - Affine(I.sigma2_E), robust::Sense::Lower,
                                                    I.eps[j], l10);
                    blk.tag = "C10_" + tj;
                    robust::add_block(m, blk);
                }
            }
            m.ge(qos_sum - Affine(I.gamma_user[k] - (off.qos.size() ? off.qos(k) : 0.0)));
            m.le(Affine::var(vs.t), sec_sum);
        }
        for (int b = 0; b < I.B; ++b)
            for (int j = 0; j < I.J; ++j) {
                robust::ParamForm qs(pd[0][b].qf[j]);
                for (int k = 0; k < I.K; ++k) qs.terms.emplace_back(vs.chi[k][b], pd[0][b].q[j][k]);
                const double need = I.gamma_sense[j] - (off.sense.size() ? off.sense(j, b) : 0.0);
                int l5 = m.add_var("lambda5_b" + std::to_string(b) + "j" + std::to_string(j));
                auto blk = robust::assemble_lmi(qs, Affine::var(sel[b], std::max(0.0, need)), robust::Sense::Lower,
                                                I.eps[j], l5);
                blk.tag = "C5_b" + std::to_string(b) + "j" + std::to_string(j);
                robust::add_block(m, blk);
            }
        // linearized penalty on chi - chi^2 over all users and patterns
        Affine obj = Affine::var(vs.t);
        for (int k = 0; k < I.K; ++k)
            for (int b = 0; b < I.B; ++b) obj -= Affine::var(vs.chi[k][b], I.rho1 * (1.0 - 2.0 * anchor(k, b)));
        m.maximize(obj);
        auto sol = conic::solve(m);
        ++res.solves;
        res.seconds += sol.seconds;
        if (!sol.ok()) {
            res.status = sol.status;
            res.message = std::string("relaxation failed: ") + sol.message;
            break;
        }
        double penalty_obj = sol.objective;
        for (int k = 0; k < I.K; ++k)
            for (int b = 0; b < I.B; ++b) {
                chi_val(k, b) = std::clamp(sol.x(vs.chi[k][b]), 0.0, 1.0);
                penalty_obj += I.rho1 * anchor(k, b) * anchor(k, b);
            }
        res.t_solver = sol.x(vs.t);
        if (round > 0 && penalty_obj < last_obj - 1e-6) res.message += "round " + std::to_string(round) + " decreased; ";
        last_obj = penalty_obj;
        anchor = chi_val;
        double frac = (chi_val.array() - chi_val.array().square()).sum();
        if (frac <= 1e-4) break;
    }
    if (res.status != conic::Status::Optimal && res.status != conic::Status::Inaccurate) return res;

    Design nd = d;
    nd.chi.setZero();
    for (int k = 0; k < I.K; ++k) {
        Eigen::Index best = 0;
        chi_val.row(k).maxCoeff(&best);
        nd.chi(k, static_cast<int>(best)) = 1;
    }
    for (int b = 0; b < I.B; ++b) {
        if (!nd.selected(b)) continue;
        double p = nd.f[b].squaredNorm();
        for (int k = 0; k < I.K; ++k)
            if (nd.chi(k, b) == 1) p += nd.W[k][b].squaredNorm();
        if (p > 1.0) {
            double s = 1.0 / std::sqrt(p);
            nd.f[b] *= s;
            for (int k = 0; k < I.K; ++k) nd.W[k][b] *= s;
        }
    }

    // Candidates are scored by the evaluator, with the candidate beamformers as
    // they are and after a beamformer re-solve on the new assignment.
    struct Pick {
        Design d;
        double t = -std::numeric_limits<double>::infinity();
        bool feasible = false;
        std::vector<Certificate> certs;
    };
    auto score = [&](const Design& cand, Pick& best) {
        Evaluation ev = evaluate(I, cand, off);
        if (ev.feasible && ev.t > best.t + 1e-9) best = {cand, ev.t, true, {}};
        Design re = cand;
        Offsets o2 = off;
        auto r4 = solve_beamformer(I, re, o2);
        res.solves += r4.solves;
        res.seconds += r4.seconds;
        if (!r4.accepted) return;
        Evaluation ev2 = evaluate(I, re, off);
        if (ev2.feasible && ev2.t > best.t + 1e-9) best = {re, ev2.t, true, r4.certs};
    };
    Pick best{d, ev0.t, ev0.feasible, {}};
    if (nd.chi != d.chi) score(nd, best);
    // one-flip local search around the incumbent
    for (int pass = 0; pass < I.assign_local_search; ++pass) {
        Pick step = best;
        for (int k = 0; k < I.K; ++k)
            for (int b = 0; b < I.B; ++b) {
                if (best.d.chi(k, b) == 1) continue;
                Design cand = best.d;
                cand.chi.row(k).setZero();
                cand.chi(k, b) = 1;
                score(cand, step);
            }
        if (step.d.chi == best.d.chi && step.t <= best.t + 1e-9) break;
        best = std::move(step);
    }
    if (best.d.chi == d.chi) {
        res.accepted = true;
        res.message += nd.chi == d.chi ? "assignment unchanged" : "rejected: rounded assignment not better";
        if (best.t > ev0.t + 1e-9 && best.feasible) {
            d = best.d;
            res.t_after = best.t;
            res.certs = best.certs;
        }
        return res;
    }
    if (best.feasible && best.t >= res.t_before - 1e-9) {
        d = best.d;
        res.accepted = true;
        res.t_after = best.t;
        res.certs = best.certs;
        res.audit_violation = detail::max_violation(res.certs);
        res.message += "assignment changed";
    } else {
        res.message += "rejected: evaluated t decreased";
    }
    return res;
}

}  // namespace mris::solvers
