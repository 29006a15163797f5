// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "mris/channel.hpp"
#include "mris/conic.hpp"
#include "mris/design.hpp"
#include "mris/robustify.hpp"
#include "mris/scenario.hpp"
#include "mris/surface.hpp"
#include "mris/uncertainty.hpp"
#include "mris/wmmse.hpp"

namespace mris::solvers {

// Problem data in solver units. Beamformers are divided by sqrt(P_max) and the
// BS->MRIS channel is multiplied by sqrt(P_max)/sigma_U, so user SNRs come out
// directly and the per-pattern power budget is 1. Eve j's channel and radius
// are divided by s_j = ||h_j||/sqrt(M) and its signals multiplied by s_j.
struct Instance {
    int K = 0, J = 0, B = 0, L = 0, M = 0, N = 0;
    surface::PatternMap pm;
    CMat Gn;
    std::vector<CVec> h_user;
    std::vector<CVec> hbar;
    std::vector<double> eps;
    std::vector<double> eve_scale;
    double sigma2_E = 1;
    std::vector<double> gamma_user;   // nats
    std::vector<double> gamma_sense;  // per Eve, in units of sigma_U^2; empty until initialized
    double gamma_sense_scale = 0.1;
    scenario::LeakageModel leakage = scenario::LeakageModel::Soc;
    // algorithm parameters
    double rho1 = 1, rho2 = 0.5, rho3 = 0.5, varpi1 = 0.85;
    double bigM1 = 0, bigM2 = 0;
    double tol_pdd_inner = 1e-3, tol_pdd_outer = 1e-4, pdd_threshold_init = 1e-2;
    int pdd_outer_max = 60, pdd_inner_max = 8, assign_rounds = 10, candidate_rounds = 3;
    int assign_local_search = 1;  // one-flip passes after rounding, 0 disables
    double P_max = 1;
};

Instance make_instance(const scenario::SystemConfig& cfg, const channel::ChannelSet& ch, const surface::PatternMap& pm,
                       const std::vector<uncertainty::RobustChannel>& eves);

// Largest beampattern gain each Eve's nominal channel admits at the design's
// phases over all patterns, with the whole power budget on one matched beam
// (solver units).
std::vector<double> max_sensing_gain(const Instance& inst, const Design& d);

Design to_solver_units(const Design& d, double P_max);
Design to_physical_units(const Design& d, double P_max);

// Constraint relaxations carried while the iterate is infeasible (restoration).
struct Offsets {
    RVec qos;    // K
    RMat sense;  // J x B
    bool any() const { return (qos.size() && qos.maxCoeff() > 0) || (sense.size() && sense.maxCoeff() > 0); }
};
Offsets zero_offsets(const Instance& inst);

// Exact evaluation of the robust secrecy surrogate at a design: user rates,
// worst-case Eve rates from closed-form leakage maxima and trust-region
// interference minima, and t = min_k (rate_k - v_k).
struct Evaluation {
    bool feasible = true;
    std::string violation;
    double t = 0;
    RVec rate;                 // K
    RVec v;                    // K, max_j v_need
    RMat v_need;               // K x J
    RMat leak_max, interf_min; // K x J
    RMat sense_min;            // J x B (selected beams only)
    RVec power;                // B
    RVec qos_deficit;          // K, max(0, Gamma - rate)
    RMat sense_deficit;        // J x B
    RMat z;                    // K x B, closed form on the assigned pattern
    CMat mu;                   // K x B
};
Evaluation evaluate(const Instance& inst, const Design& d, const Offsets& off);

// Worst-case Eve quantities of user k placed on pattern b with the current co-pattern users.
struct PairEve {
    std::vector<double> leak_max, interf_min, v_need;
};
PairEve pair_eve(const Instance& inst, const Design& d, int k, int b, const CVec& u_b);

// A semi-infinite inequality certified by one LMI, evaluated at the solution.
struct Certificate {
    robust::QuadraticForm q;
    double rhs = 0;
    robust::Sense sense = robust::Sense::Upper;
    double eps = 0;
    std::string tag;
};
// Worst violation of the certified inequality over the ball (exact trust-region value).
double certificate_violation(const Certificate& c);

struct BlockResult {
    std::string block;
    conic::Status status = conic::Status::Error;
    bool accepted = false;
    bool restoration = false;
    double t_before = 0, t_after = 0, t_solver = 0;
    double seconds = 0;
    int solves = 0;
    double audit_violation = 0;
    std::string message;
    std::vector<Certificate> certs;
    std::vector<double> lambdas;
};

BlockResult solve_beamformer(const Instance& inst, Design& d, Offsets& off);

// AN vector of the given power along the Eves' effective channels on pattern b,
// orthogonal to the channels of the users served there.
CVec seed_an(const Instance& inst, const Design& d, int b, double power);

// Candidate beamformers for the pairs that are not assigned, re-optimized with
// the pair's pattern populated by the current users.
void refresh_candidates(const Instance& inst, Design& d, int rounds);

BlockResult solve_assignment(const Instance& inst, Design& d, Offsets& off);

CVec project_unit_modulus(const CVec& nu, const CVec& lambda_dual, double rho);

enum class PhaseBlock { S1, S2 };

struct PddState {
    CVec nu, nu_breve, lambda_dual;
    double rho = 0.5;
    double threshold = 1e-2;
};

struct PddTrace {
    std::vector<double> residual_inf;   // per outer iteration
    std::vector<double> objective;      // augmented objective per outer iteration
    std::vector<double> t_eval;         // evaluated t at nu_breve per outer iteration
    int inner_solves = 0;
    double final_residual_inf = 0;
};

BlockResult pdd_phase(const Instance& inst, Design& d, Offsets& off, PhaseBlock which, PddTrace* trace = nullptr);

}  // namespace mris::solvers
