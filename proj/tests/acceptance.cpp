// SPDX-License-Identifier: Apache-2.0
// Acceptance checks. Prints one PASS/FAIL line per criterion; exits nonzero if
// any selected criterion fails. Pass criterion numbers to run a subset.
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>

#include "mris/expcli.hpp"
#include "mris/orchestrator.hpp"

using namespace mris;

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Verdict {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, double a) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

scenario::SystemConfig config(const std::string& name, const std::vector<std::string>& overrides = {}) {
    auto cfg = scenario::load_config(std::string(MRIS_SOURCE_DIR) + "/configs/" + name);
    for (const auto& o : overrides) scenario::apply_override(cfg, o);
    return cfg;
}

CVec randc(int n, Rng& rng, double s = 1.0) {
    std::normal_distribution<double> nd(0.0, s);
    CVec v(n);
    for (int i = 0; i < n; ++i) v(i) = cd(nd(rng), nd(rng));
    return v;
}

// ---------------------------------------------------------------- 1
Verdict bound_map() {
    auto t0 = Clock::now();
    expcli::BoundsSpec spec;
    auto cells = expcli::validate_bounds(spec);
    const double sec = since(t0);
    long violations = 0, checked = 0;
    double eps_min = 0, eps_max = 0, eta_lo = 1, eta_hi = 0, worst = 0;
    bool eta_ok = true;
    for (const auto& c : cells) {
        if (c.samples > 0) {
            ++checked;
            violations += c.violations;
            worst = std::max(worst, c.worst_ratio);
        }
        if (c.iD == 0 && c.iA == 0) eps_min = c.eps;
        if (c.iD == spec.n_D - 1 && c.iA == spec.n_angle - 1) eps_max = c.eps;
        if (c.D > 0 || c.Theta > 0) {
            eta_lo = std::min(eta_lo, c.eta);
            eta_hi = std::max(eta_hi, c.eta);
            eta_ok = eta_ok && c.eta > 0 && c.eta < 1;
        }
    }
    Verdict v;
    const bool a = checked == spec.spot_cells && violations == 0;
    const bool b = std::abs(eps_min - 0.1) <= 0.05 && std::abs(eps_max - 0.8) <= 0.1;
    v.pass = a && b && eta_ok && sec < 300;
    std::ostringstream os;
    os << "spot cells " << checked << " x " << spec.samples << " samples, violations " << violations
       << ", worst ratio " << fmt("%.4f", worst) << "; eps min corner " << fmt("%.3f", eps_min) << ", max corner "
       << fmt("%.3f", eps_max) << "; eta in [" << fmt("%.2e", eta_lo) << ", " << fmt("%.4f", eta_hi) << "]; "
       << fmt("%.1f", sec) << " s";
    v.detail = os.str();
    return v;
}

// ---------------------------------------------------------------- 2
Verdict two_user() {
    auto t0 = Clock::now();
    auto mcfg = config("two_user_mris.ini"), scfg = config("two_user_sris.ini");
    std::vector<double> mw, sw, mn, sn;
    bool per_seed = true;
    for (unsigned long seed = 1; seed <= 5; ++seed) {
        auto m = expcli::run(mcfg, seed, 1000).record;
        auto s = expcli::run(scfg, seed, 1000).record;
        mw.push_back(m.min_secrecy_worst_bits);
        sw.push_back(s.min_secrecy_worst_bits);
        mn.push_back(m.min_secrecy_nominal_bits);
        sn.push_back(s.min_secrecy_nominal_bits);
        per_seed = per_seed && m.min_secrecy_worst_bits > s.min_secrecy_worst_bits;
        std::cout << "  two-user seed " << seed << ": MRIS worst " << fmt("%.4f", m.min_secrecy_worst_bits) << " nominal "
                  << fmt("%.4f", m.min_secrecy_nominal_bits) << " | SRIS worst " << fmt("%.4f", s.min_secrecy_worst_bits)
                  << " nominal " << fmt("%.4f", s.min_secrecy_nominal_bits) << " bits\n"
                  << std::flush;
    }
    const double sec = since(t0);
    const double m = expcli::median(mw), s = expcli::median(sw);
    Verdict v;
    v.pass = m >= 1.0 && m <= 2.0 && s >= 0.15 && s <= 0.8 && per_seed && sec < 900;
    std::ostringstream os;
    os << "median worst-case MRIS " << fmt("%.4f", m) << " (target [1, 2]), SRIS " << fmt("%.4f", s)
       << " (target [0.15, 0.8]); nominal medians " << fmt("%.4f", expcli::median(mn)) << " / "
       << fmt("%.4f", expcli::median(sn)) << "; MRIS > SRIS every seed: " << (per_seed ? "yes" : "no") << "; "
       << fmt("%.1f", sec) << " s";
    v.detail = os.str();
    return v;
}

// ---------------------------------------------------------------- 3
Verdict wmmse_identity() {
    Rng rng(3);
    std::uniform_int_distribution<int> ui(1, 4);
    std::uniform_real_distribution<double> us(0.01, 3.0);
    double worst = 0;
    for (int t = 0; t < 1000; ++t) {
        const int L = ui(rng) + 1, K = ui(rng);
        CVec h = randc(L, rng);
        std::vector<CVec> W;
        for (int k = 0; k < K; ++k) W.push_back(randc(L, rng, us(rng)));
        CVec f = randc(L, rng, 0.3 * us(rng));
        Eigen::VectorXi chi = Eigen::VectorXi::Ones(K);
        for (int k = 1; k < K; ++k) chi(k) = ui(rng) % 2;
        const double s2 = us(rng);
        const int k = 0;
        auto r = metrics::user_rate(h, W, f, chi, k, s2);
        cd mu = wmmse::update_mu(h, W, f, chi, k, s2);
        double y = wmmse::surrogate_rate(wmmse::update_z(r.sinr), mu, h, W, f, chi, k, s2);
        worst = std::max(worst, std::abs(y - r.rate));
    }
    return {worst <= 1e-9, "1000 instances, max |surrogate - ln(1+SINR)| = " + fmt("%.3e", worst)};
}

// ---------------------------------------------------------------- 4
Verdict taylor_bound() {
    Rng rng(4);
    std::uniform_int_distribution<int> um(1, 6);
    std::uniform_real_distribution<double> us(0.05, 2.0);
    long violations = 0;
    double worst_gap = 0, worst_tight = 0;
    const long draws = 100000;
    for (long t = 0; t < draws; ++t) {
        const int M = um(rng), L = 1 + static_cast<int>(t % 3);
        CVec h = randc(M, rng);
        CVec dh = randc(M, rng, us(rng));
        double val, lb, tight_err;
        if (t % 2 == 0) {
            // generic form in the signal vector X
            CVec Xe = randc(M, rng, us(rng)), Xc = randc(M, rng, us(rng));
            val = std::norm((h + dh).dot(Xc));
            lb = robust::signal_taylor_form(h, Xe, Xc).eval(dh);
            tight_err = std::abs(robust::signal_taylor_form(h, Xe, Xe).eval(dh) - std::norm((h + dh).dot(Xe))) /
                        (1 + std::norm((h + dh).dot(Xe)));
        } else {
            // cascaded form in the surface phases and the beamformer
            CMat G(M, L);
            for (int l = 0; l < L; ++l) G.col(l) = randc(M, rng);
            CVec ue = randc(M, rng), uc = randc(M, rng), we = randc(L, rng), wc = randc(L, rng);
            for (int m = 0; m < M; ++m) {
                ue(m) /= std::abs(ue(m));
                uc(m) /= std::abs(uc(m));
            }
            CVec Xc = uc.cwiseProduct(G * wc), Xe = ue.cwiseProduct(G * we);
            val = std::norm((h + dh).dot(Xc));
            lb = robust::taylor_quadratic_form(h, G, ue, we, uc, wc).eval(dh);
            tight_err = std::abs(robust::taylor_quadratic_form(h, G, ue, we, ue, we).eval(dh) -
                                 std::norm((h + dh).dot(Xe))) /
                        (1 + std::norm((h + dh).dot(Xe)));
        }
        const double gap = (lb - val) / (1 + std::abs(val));
        if (gap > 1e-10) ++violations;
        worst_gap = std::max(worst_gap, gap);
        worst_tight = std::max(worst_tight, tight_err);
    }
    Verdict v;
    v.pass = violations == 0 && worst_tight <= 1e-10;
    v.detail = std::to_string(draws) + " draws (M <= 6), violations " + std::to_string(violations) +
               ", max relative excess " + fmt("%.3e", worst_gap) + ", max tightness error " + fmt("%.3e", worst_tight);
    return v;
}

// ---------------------------------------------------------------- 5
CVec sphere_point(int n, double eps, bool interior, Rng& rng) {
    CVec x = randc(n, rng);
    double r = eps;
    if (interior) r *= std::pow(std::uniform_real_distribution<double>(0, 1)(rng), 1.0 / (2 * n));
    return x / x.norm() * r;
}

Verdict s_procedure() {
    auto cfg = config("small.ini");
    long certs = 0, blocks = 0, samples = 0;
    double worst = std::numeric_limits<double>::infinity(), worst_rel = worst, worst_exact = -worst;
    Rng srng(5);
    for (unsigned long seed = 1; seed <= 20; ++seed) {
        Rng rng(seed);
        auto sc = orchestrator::build_scenario(cfg, rng);
        auto st = orchestrator::initialize_solution(sc, rng);
        auto& d = st.design;
        auto& off = st.off;
        std::vector<solvers::BlockResult> res;
        for (int round = 0; round < 2; ++round) {
            res.push_back(solvers::solve_beamformer(sc.inst, d, off));
            res.push_back(solvers::pdd_phase(sc.inst, d, off, solvers::PhaseBlock::S1));
            if (sc.inst.N > 0) res.push_back(solvers::pdd_phase(sc.inst, d, off, solvers::PhaseBlock::S2));
            if (sc.inst.B > 1) {
                solvers::refresh_candidates(sc.inst, d, sc.inst.candidate_rounds);
                res.push_back(solvers::solve_assignment(sc.inst, d, off));
            }
        }
        for (const auto& r : res) {
            if (!r.accepted) continue;
            ++blocks;
            for (const auto& c : r.certs) {
                ++certs;
                worst_exact = std::max(worst_exact, solvers::certificate_violation(c));
                for (int s = 0; s < 10000; ++s) {
                    CVec x = sphere_point(c.q.dim(), c.eps, s % 2 == 1, srng);
                    const double q = c.q.eval(x);
                    const double slack = c.sense == robust::Sense::Upper ? c.rhs - q : q - c.rhs;
                    worst = std::min(worst, slack);
                    worst_rel = std::min(worst_rel, slack / (1 + std::abs(c.rhs)));
                    ++samples;
                }
            }
        }
    }
    Verdict v;
    v.pass = certs > 0 && worst >= -1e-6;
    v.detail = std::to_string(blocks) + " accepted blocks, " + std::to_string(certs) + " certificates, " +
               std::to_string(samples) + " samples; min slack " + fmt("%.3e", worst) + " (relative " +
               fmt("%.3e", worst_rel) + "), max exact violation " + fmt("%.3e", worst_exact);
    return v;
}

// ---------------------------------------------------------------- 6
Verdict monotonicity() {
    auto cfg = config("small.ini");
    int pairs = 0, skipped = 0, drops = 0;
    double worst_drop = 0, worst_res = 0, worst_mod = 0;
    for (unsigned long seed = 1; seed <= 20; ++seed) {
        Rng rng(seed);
        auto sc = orchestrator::build_scenario(cfg, rng);
        auto st = orchestrator::initialize_solution(sc, rng);
        bool prev_feasible = !st.off.any();
        orchestrator::AoOptions opt;
        opt.mc_samples = -1;
        auto out = orchestrator::run_ao(st, sc, opt);
        double prev = out.t_initial;
        for (const auto& r : out.log) {
            // a relaxed iterate is outside the feasible set; the chain starts at
            // the first iterate without active offsets
            if (prev_feasible) {
                ++pairs;
                if (r.t < prev - 1e-4) ++drops;
                worst_drop = std::max(worst_drop, prev - r.t);
            } else {
                ++skipped;
            }
            prev_feasible = !r.offsets_active;
            prev = r.t;
        }
        for (double res : out.pdd_final_residual) worst_res = std::max(worst_res, res);
        for (Eigen::Index m = 0; m < out.design.theta.size(); ++m)
            worst_mod = std::max(worst_mod, std::abs(std::abs(out.design.theta(m)) - 1.0));
        for (Eigen::Index m = 0; m < out.design.phi.size(); ++m)
            worst_mod = std::max(worst_mod, std::abs(std::abs(out.design.phi(m)) - 1.0));
    }
    Verdict v;
    v.pass = drops == 0 && worst_res <= 1e-4 && worst_mod <= 1e-12;
    v.detail = "20 seeds, " + std::to_string(pairs) + " feasible steps (" + std::to_string(skipped) +
               " after relaxed iterates skipped), drops > 1e-4: " + std::to_string(drops) + ", largest drop " +
               fmt("%.3e", worst_drop) + "; max PDD residual " + fmt("%.3e", worst_res) +
               "; max ||u|-1| " + fmt("%.3e", worst_mod);
    return v;
}

// ---------------------------------------------------------------- 7
Verdict patterns() {
    long grids = 0, bad = 0;
    for (int Mr = 1; Mr <= 36; ++Mr)
        for (int Mc = 1; Mr * Mc <= 36; ++Mc)
            for (int Nr = 1; Nr <= Mr; ++Nr)
                for (int Nc = 1; Nc <= Mc; ++Nc) {
                    ++grids;
                    auto pm = surface::build_pattern_maps(Mr, Mc, Nr, Nc);
                    const int M = Mr * Mc, N = Nr * Nc;
                    bool ok = pm.B == (Mr - Nr + 1) * (Mc - Nc + 1);
                    std::set<std::vector<int>> masks;
                    for (int r = 0; r + Nr <= Mr; ++r)
                        for (int c = 0; c + Nc <= Mc; ++c) {
                            std::vector<int> mask(static_cast<std::size_t>(M), 0);
                            for (int i = 0; i < Nr; ++i)
                                for (int j = 0; j < Nc; ++j) mask[static_cast<std::size_t>((r + i) * Mc + c + j)] = 1;
                            masks.insert(mask);
                        }
                    ok = ok && static_cast<int>(masks.size()) == pm.B;
                    std::set<std::vector<int>> seen;
                    for (int b = 0; b < pm.B && ok; ++b) {
                        Eigen::VectorXi cover = pm.E[b] * Eigen::VectorXi::Ones(N) + pm.e[b];
                        ok = ok && cover == Eigen::VectorXi::Ones(M);
                        for (int n = 0; n < N; ++n) ok = ok && pm.E[b].col(n).sum() == 1;
                        std::vector<int> mask(static_cast<std::size_t>(M));
                        for (int m = 0; m < M; ++m) mask[static_cast<std::size_t>(m)] = 1 - pm.e[b](m);
                        ok = ok && masks.count(mask) == 1 && seen.insert(mask).second;
                    }
                    if (!ok) ++bad;
                }
    return {bad == 0, std::to_string(grids) + " (M, N) grids with M <= 36, mismatches " + std::to_string(bad)};
}

// ---------------------------------------------------------------- 8
Verdict oracle() {
    auto cfg = config("two_user_mris.ini");
    int matches = 0;
    std::ostringstream gaps;
    for (unsigned long seed = 1; seed <= 10; ++seed) {
        auto r = expcli::oracle_assignment(cfg, seed, 2);
        matches += r.match;
        gaps << (seed > 1 ? ", " : "") << fmt("%.2e", r.gap);
        std::cout << "  oracle seed " << seed << ": " << (r.match ? "match" : "mismatch") << ", t_solver "
                  << fmt("%.5f", r.t_solver) << ", t_best " << fmt("%.5f", r.t_best) << ", gap " << fmt("%.3e", r.gap)
                  << ", feasible candidates " << r.feasible_candidates << "/" << r.candidates << "\n"
                  << std::flush;
    }
    // informational: the rounded relaxation without the one-flip search
    auto bare = cfg;
    bare.assign_local_search = 0;
    int bare_matches = 0;
    for (unsigned long seed = 1; seed <= 10; ++seed) bare_matches += expcli::oracle_assignment(bare, seed, 2).match;
    return {matches >= 8, "K=2, B=2, matches " + std::to_string(matches) + "/10; gaps (nats) " + gaps.str() +
                              "; relaxation rounding alone matches " + std::to_string(bare_matches) + "/10"};
}

// ---------------------------------------------------------------- 9
Verdict trend() {
    auto t0 = Clock::now();
    auto mcfg = config("trend_5x5.ini"), scfg = config("trend_5x5.ini", {"system.N_r=0", "system.N_c=0"});
    std::vector<double> mw, sw, mn, sn;
    for (unsigned long seed = 1; seed <= 5; ++seed) {
        auto m = expcli::run(mcfg, seed, 1000).record;
        auto s = expcli::run(scfg, seed, 1000).record;
        mw.push_back(m.min_secrecy_worst_bits);
        sw.push_back(s.min_secrecy_worst_bits);
        mn.push_back(m.min_secrecy_nominal_bits);
        sn.push_back(s.min_secrecy_nominal_bits);
        std::cout << "  5x5 seed " << seed << ": N=1x1 worst " << fmt("%.4f", m.min_secrecy_worst_bits) << " | N=0 worst "
                  << fmt("%.4f", s.min_secrecy_worst_bits) << " bits\n"
                  << std::flush;
    }
    const double m = expcli::median(mw), s = expcli::median(sw);
    Verdict v;
    v.pass = m > s;
    v.detail = "M=5x5, 5 seeds: median worst-case N=1x1 " + fmt("%.4f", m) + " vs N=0 " + fmt("%.4f", s) +
               " bits; nominal medians " + fmt("%.4f", expcli::median(mn)) + " vs " + fmt("%.4f", expcli::median(sn)) +
               "; " + fmt("%.1f", since(t0)) + " s";
    return v;
}

}  // namespace

int main(int argc, char** argv) {
    const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria = {
        {"uncertainty bound map", bound_map},
        {"two-user MRIS vs SRIS", two_user},
        {"WMMSE fixed-point identity", wmmse_identity},
        {"Taylor global lower bound", taylor_bound},
        {"S-procedure soundness", s_procedure},
        {"AO monotonicity", monotonicity},
        {"pattern-map combinatorics", patterns},
        {"assignment oracle", oracle},
        {"5x5 directional trend", trend},
    };
    std::set<int> pick;
    for (int i = 1; i < argc; ++i) pick.insert(std::stoi(argv[i]));
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const int n = static_cast<int>(i) + 1;
        if (!pick.empty() && !pick.count(n)) continue;
        Verdict v;
        try {
            v = criteria[i].second();
        } catch (const std::exception& e) {
            v = {false, std::string("exception: ") + e.what()};
        }
        failed += !v.pass;
        std::cout << (v.pass ? "PASS" : "FAIL") << " criterion " << n << " (" << criteria[i].first << "): " << v.detail
                  << "\n"
                  << std::flush;
    }
    return failed == 0 ? 0 : 1;
}
