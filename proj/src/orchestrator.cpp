// SPDX-License-Identifier: Apache-2.0
#include "mris/orchestrator.hpp"

#include <cmath>

#include <nlohmann/json.hpp>

namespace mris::orchestrator {

ScenarioData build_scenario(const scenario::SystemConfig& cfg, Rng& rng) {
    scenario::validate(cfg);
    ScenarioData sc;
    sc.cfg = cfg;
    sc.layout = scenario::place_nodes(cfg, rng);
    sc.channels = channel::synthesize_channels(cfg, sc.layout, rng);
    sc.pm = surface::build_pattern_maps(cfg.M_r, cfg.M_c, cfg.N_r, cfg.N_c);
    for (int j = 0; j < static_cast<int>(sc.layout.eve_pos.size()); ++j) {
        auto u = uncertainty::from_config(cfg, sc.layout, j);
        auto geom = uncertainty::bound_geometry(u, cfg.M_r, cfg.M_c, cfg.dpsi_grid);
        auto rc = uncertainty::robust_channel(u, geom, cfg.M_r, cfg.M_c);
        sc.unc.push_back(u);
        sc.robust.push_back(rc);
        sc.eves.push_back({u, rc.h_nominal});
        sc.channels.h_eve_nominal.push_back(rc.h_nominal);
        sc.channels.eps_eve.push_back(rc.eps_sphere);
    }
    sc.inst = solvers::make_instance(cfg, sc.channels, sc.pm, sc.robust);
    return sc;
}

namespace {

CVec random_phases(int n, Rng& rng) {
    std::uniform_real_distribution<double> ua(0.0, 2.0 * kPi);
    CVec v(n);
    for (int i = 0; i < n; ++i) v(i) = std::polar(1.0, ua(rng));
    return v;
}

void refresh_aux(SolutionState& st, const solvers::Instance& I) {
    auto ev = solvers::evaluate(I, st.design, st.off);
    st.aux.z = ev.z;
    st.aux.mu = ev.mu;
    st.aux.t = ev.t;
    st.aux.v = RMat::Zero(I.K, I.B);
    st.aux.v_bar.assign(static_cast<std::size_t>(I.J), RMat::Zero(I.K, I.B));
    for (int k = 0; k < I.K; ++k) {
        int b = st.design.beam_of(k);
        st.aux.v(k, b) = ev.v(k);
        for (int j = 0; j < I.J; ++j) st.aux.v_bar[j](k, b) = ev.interf_min(k, j) + I.sigma2_E;
    }
}

}  // namespace

SolutionState initialize_solution(ScenarioData& sc, Rng& rng) {
    auto& I = sc.inst;
    SolutionState st;
    Design& d = st.design;
    d.theta = random_phases(I.M, rng);
    d.phi = random_phases(I.N, rng);
    d.chi = Eigen::MatrixXi::Zero(I.K, I.B);
    d.W.assign(static_cast<std::size_t>(I.K), std::vector<CVec>(static_cast<std::size_t>(I.B)));
    d.f.assign(static_cast<std::size_t>(I.B), CVec());
    std::vector<std::vector<CVec>> rows(static_cast<std::size_t>(I.K), std::vector<CVec>(static_cast<std::size_t>(I.B)));
    for (int k = 0; k < I.K; ++k) {
        int best = 0;
        double bg = -1;
        for (int b = 0; b < I.B; ++b) {
            CVec u = surface::reflection(I.pm, d.theta, d.phi, b);
            rows[k][b] = channel::effective_channel(I.h_user[k], u, I.Gn);
            double g = rows[k][b].norm();
            if (g > bg) {
                bg = g;
                best = b;
            }
        }
        d.chi(k, best) = 1;
    }
    std::normal_distribution<double> nd(0.0, 1.0);
    for (int b = 0; b < I.B; ++b) {
        int users = d.chi.col(b).sum();
        for (int k = 0; k < I.K; ++k) {
            // matched filter; pairs that are not assigned get the single-user share
            double p = 0.9 / std::max(1, d.chi(k, b) == 1 ? users : users + 1);
            const CVec& r = rows[k][b];
            d.W[k][b] = r.norm() > 0 ? CVec(r.conjugate() / r.norm() * std::sqrt(p)) : CVec(CVec::Zero(I.L));
        }
        CVec f(I.L);
        for (int l = 0; l < I.L; ++l) f(l) = cd(nd(rng), nd(rng));
        d.f[b] = f / f.norm() * std::sqrt(0.1);
    }
    if (static_cast<int>(I.gamma_sense.size()) != I.J) {
        I.gamma_sense.clear();
        for (double g : solvers::max_sensing_gain(I, d)) I.gamma_sense.push_back(I.gamma_sense_scale * g);
    }
    auto ev = solvers::evaluate(I, d, solvers::zero_offsets(I));
    st.off = solvers::zero_offsets(I);
    st.off.qos = ev.qos_deficit;
    st.off.sense = ev.sense_deficit;
    // small margin so the relaxed constraints hold strictly at the start
    for (int k = 0; k < I.K; ++k)
        if (st.off.qos(k) > 0) st.off.qos(k) += 1e-6;
    for (int j = 0; j < I.J; ++j)
        for (int b = 0; b < I.B; ++b)
            if (st.off.sense(j, b) > 0) st.off.sense(j, b) += 1e-6 * std::max(1.0, I.gamma_sense[j]);
    refresh_aux(st, I);
    st.t_initial = st.aux.t;
    return st;
}

metrics::RateReport report(const SolutionState& st, const ScenarioData& sc, int mc_samples, Rng& rng) {
    Design phys = solvers::to_physical_units(st.design, sc.cfg.P_max);
    return metrics::secrecy_report(phys, sc.channels, sc.pm, sc.eves, sc.cfg.sigma2_U, sc.cfg.sigma2_E, sc.cfg.M_r,
                                   sc.cfg.M_c, mc_samples, rng);
}

namespace {

BlockLog to_log(const solvers::BlockResult& r) {
    BlockLog l;
    l.block = r.block;
    l.status = conic::status_name(r.status);
    l.accepted = r.accepted;
    l.restoration = r.restoration;
    l.t_before = r.t_before;
    l.t_after = r.t_after;
    l.seconds = r.seconds;
    l.solves = r.solves;
    l.audit_violation = r.audit_violation;
    l.message = r.message;
    return l;
}

bool hard_failure(const solvers::BlockResult& r) {
    return r.status == conic::Status::Error && !r.accepted;
}

}  // namespace

SolutionState run_ao(SolutionState st, const ScenarioData& sc, const AoOptions& opt) {
    const auto& I = sc.inst;
    const int tau_max = opt.max_iter >= 0 ? opt.max_iter : sc.cfg.tau_max;
    Rng mc(opt.mc_seed);
    double t_prev = solvers::evaluate(I, st.design, st.off).t;
    for (int it = 1; it <= tau_max; ++it) {
        IterationRecord rec;
        rec.iter = it;
        refresh_aux(st, I);
        auto r4 = solvers::solve_beamformer(I, st.design, st.off);
        rec.blocks.push_back(to_log(r4));
        st.degraded = st.degraded || hard_failure(r4);
        solvers::PddTrace tr1;
        auto r1 = solvers::pdd_phase(I, st.design, st.off, solvers::PhaseBlock::S1, &tr1);
        rec.blocks.push_back(to_log(r1));
        st.degraded = st.degraded || hard_failure(r1);
        st.pdd_final_residual.push_back(tr1.final_residual_inf);
        if (I.N > 0) {
            solvers::PddTrace tr2;
            auto r2 = solvers::pdd_phase(I, st.design, st.off, solvers::PhaseBlock::S2, &tr2);
            rec.blocks.push_back(to_log(r2));
            st.degraded = st.degraded || hard_failure(r2);
            st.pdd_final_residual.push_back(tr2.final_residual_inf);
        }
        refresh_aux(st, I);
        if (I.B > 1) {
            solvers::refresh_candidates(I, st.design, I.candidate_rounds);
            auto r7 = solvers::solve_assignment(I, st.design, st.off);
            rec.blocks.push_back(to_log(r7));
            st.degraded = st.degraded || hard_failure(r7);
        }
        refresh_aux(st, I);
        rec.t = st.aux.t;
        rec.offsets_active = st.off.any();
        rec.qos_offset = st.off.qos.size() ? st.off.qos.maxCoeff() : 0.0;
        rec.sense_offset = st.off.sense.size() ? st.off.sense.maxCoeff() : 0.0;
        if (opt.mc_samples >= 0) {
            auto rep = report(st, sc, opt.mc_samples, mc);
            rec.min_secrecy_nominal_bits = nats2bits(rep.min_secrecy_nominal);
            rec.min_secrecy_worst_bits = nats2bits(rep.min_secrecy_worst);
        }
        st.log.push_back(rec);
        st.iterations = it;
        if (opt.jsonl) *opt.jsonl << record_json(rec) << '\n' << std::flush;
        double change = std::abs(rec.t - t_prev) / std::max(std::abs(rec.t), 1e-6);
        t_prev = rec.t;
        if (!rec.offsets_active && change <= sc.cfg.tol_ao) {
            st.converged = true;
            break;
        }
    }
    return st;
}

std::string record_json(const IterationRecord& r) {
    nlohmann::json j;
    j["iter"] = r.iter;
    j["t"] = r.t;
    j["min_secrecy_nominal_bits"] = r.min_secrecy_nominal_bits;
    j["min_secrecy_worst_bits"] = r.min_secrecy_worst_bits;
    j["offsets_active"] = r.offsets_active;
    j["qos_offset"] = r.qos_offset;
    j["sense_offset"] = r.sense_offset;
    j["blocks"] = nlohmann::json::array();
    for (const auto& b : r.blocks)
        j["blocks"].push_back({{"block", b.block},
                               {"status", b.status},
                               {"accepted", b.accepted},
                               {"restoration", b.restoration},
                               {"t_before", b.t_before},
                               {"t_after", b.t_after},
                               {"seconds", b.seconds},
                               {"solves", b.solves},
                               {"audit_violation", b.audit_violation},
                               {"message", b.message}});
    return j.dump();
}

}  // namespace mris::orchestrator
