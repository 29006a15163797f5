// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "mris/metrics.hpp"
#include "mris/solvers.hpp"

namespace mris::orchestrator {

// Everything derived deterministically from (config, seed) before optimization.
struct ScenarioData {
    scenario::SystemConfig cfg;
    scenario::NodeLayout layout;
    channel::ChannelSet channels;
    surface::PatternMap pm;
    std::vector<uncertainty::EveUncertainty> unc;
    std::vector<uncertainty::RobustChannel> robust;
    std::vector<metrics::EveModel> eves;
    solvers::Instance inst;
};

ScenarioData build_scenario(const scenario::SystemConfig& cfg, Rng& rng);

struct BlockLog {
    std::string block;
    std::string status;
    bool accepted = false;
    bool restoration = false;
    double t_before = 0, t_after = 0;
    double seconds = 0;
    int solves = 0;
    double audit_violation = 0;
    std::string message;
};

struct IterationRecord {
    int iter = 0;
    double t = 0;  // evaluated surrogate after the iteration (nats)
    double min_secrecy_nominal_bits = 0, min_secrecy_worst_bits = 0;
    bool offsets_active = false;
    double qos_offset = 0, sense_offset = 0;  // largest active relaxations
    std::vector<BlockLog> blocks;
};

struct SolutionState {
    Design design;  // solver units
    wmmse::AuxiliaryState aux;
    solvers::Offsets off;
    std::vector<IterationRecord> log;
    std::vector<double> pdd_final_residual;  // per phase block call
    bool degraded = false;
    bool converged = false;
    int iterations = 0;
    double t_initial = 0;
};

// Also fills the per-Eve sensing floors when the configuration leaves them empty.
SolutionState initialize_solution(ScenarioData& sc, Rng& rng);

struct AoOptions {
    int mc_samples = 0;         // Monte Carlo samples for the logged secrecy
    unsigned long mc_seed = 1;  // stream for the logged secrecy
    std::ostream* jsonl = nullptr;
    int max_iter = -1;          // overrides tau_max when >= 0
};

SolutionState run_ao(SolutionState state, const ScenarioData& sc, const AoOptions& opt);

// Secrecy report of a state in physical units.
metrics::RateReport report(const SolutionState& st, const ScenarioData& sc, int mc_samples, Rng& rng);

std::string record_json(const IterationRecord& r);

}  // namespace mris::orchestrator
