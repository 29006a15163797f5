// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "mris/orchestrator.hpp"

namespace mris::expcli {

// One pipeline run: (config, seed) -> optimized design and its secrecy report.
struct ResultRecord {
    std::string config_hash;
    unsigned long seed = 0;
    std::string engine;
    std::string label;  // sweep cell label, empty for single runs
    int K = 0, J = 0, M_r = 0, M_c = 0, N_r = 0, N_c = 0, B = 0;
    double min_secrecy_nominal_bits = 0, min_secrecy_worst_bits = 0;
    std::vector<double> secrecy_nominal_bits, secrecy_worst_bits;  // per user
    std::vector<int> beam;
    std::vector<double> t_trace;                // t after initialization, then per iteration
    std::vector<std::vector<double>> gain;      // [j][b] nominal beampattern gain (W)
    std::vector<double> iteration_seconds;
    double seconds = 0;
    int iterations = 0;
    int mc_samples = 0;
    bool converged = false, degraded = false, offsets_active = false;
    // final phases and assignment, enough to replay the reported numbers
    std::vector<double> theta_arg, phi_arg;
    std::vector<std::vector<int>> chi;
};

struct RunOutput {
    ResultRecord record;
    orchestrator::ScenarioData scenario;
    orchestrator::SolutionState state;
};

// Full pipeline. The iteration log is streamed to jsonl when given.
RunOutput run(const scenario::SystemConfig& cfg, unsigned long seed, int mc_samples, std::ostream* jsonl = nullptr);

std::string record_json(const ResultRecord& r);
std::string csv_header();
std::string csv_row(const ResultRecord& r);
// Writes <out>/run_<hash>_<seed>.json and appends a row to <out>/runs.csv.
void persist(const ResultRecord& r, const std::string& out_dir);

// ---- sweeps
struct SweepCell {
    std::string label;
    std::vector<std::string> overrides;
};

// Cartesian product of "key=v1,v2,..." axes.
std::vector<SweepCell> grid_cells(const std::vector<std::string>& axes);
// Named element-allocation sequences: case-1-1, case-1-2, case-2-1, case-2-2
// (M + N = 36 starting from a 6x6 single-layer surface) and trend-5x5.
std::vector<SweepCell> preset_cells(const std::string& name);

struct CellSummary {
    std::string label;
    int runs = 0;
    double median_nominal_bits = 0, mean_nominal_bits = 0;
    double median_worst_bits = 0, mean_worst_bits = 0;
};

struct SweepResult {
    std::vector<ResultRecord> rows;  // cell-major, seeds inner
    std::vector<CellSummary> cells;
};

// Every (cell, seed) builds its own random stream from the seed. jobs > 1 runs
// cells on worker threads; rows are collected and written by the caller thread.
SweepResult sweep(const scenario::SystemConfig& base, const std::vector<SweepCell>& cells,
                  const std::vector<unsigned long>& seeds, int mc_samples, int jobs = 1);
std::string summary_csv(const std::vector<CellSummary>& cells);
double median(std::vector<double> v);

// ---- uncertainty bound validation
struct BoundsSpec {
    double theta_bar = kPi / 3, phi_bar = kPi / 3, d_bar = 50;
    int M_r = 1, M_c = 10;
    double eps_nlos = 0.377;
    double kappa = (0.377 / 0.1) * (0.377 / 0.1);
    double beta0 = 1e-3, d_R = 0.025, lambda_c = 0.1;
    double D_max = 5;                // m
    double angle_max = deg2rad(5);   // rad, Theta = Psi on the angular axis
    int n_D = 6, n_angle = 6;
    int dpsi_grid = 64;
    long samples = 100000;           // per spot-checked cell
    int spot_cells = 8;
    unsigned long seed = 1;
};

struct BoundsCell {
    int iD = 0, iA = 0;
    double D = 0, Theta = 0, Psi = 0;
    double eta = 0, eps = 0;
    double eps_sphere = 0;
    long samples = 0, violations = 0;
    double worst_ratio = 0;  // max ||h - h_bar|| / eps_sphere over samples
};

// Spot-checked cells: the four corners plus interior cells spread along the diagonal.
std::vector<BoundsCell> validate_bounds(const BoundsSpec& spec);
std::string bounds_csv(const std::vector<BoundsCell>& cells);

// ---- beam-gain maps
struct MapSpec {
    double range = 60;  // m
    double az_min = -90, az_max = 90, el_min = -60, el_max = 60;  // deg
    int n_az = 91, n_el = 61;
};

struct MapPoint {
    double az = 0, el = 0;  // deg
    double comm = 0, an = 0, total = 0;  // W
};

// Gain of the LoS response at each direction, summed over the selected patterns.
std::vector<MapPoint> beampattern_map(const orchestrator::SolutionState& st, const orchestrator::ScenarioData& sc,
                                      const MapSpec& spec);
std::string map_csv(const std::vector<MapPoint>& pts);

// Renders one numeric column of a CSV file as a grayscale PPM image (log scale
// when requested). Images are produced from files only.
void render_heatmap(const std::string& csv_path, const std::string& x_col, const std::string& y_col,
                    const std::string& value_col, bool log_scale, const std::string& ppm_path);

// ---- assignment oracle
struct OracleReport {
    unsigned long seed = 0;
    std::vector<std::vector<int>> chi_solver, chi_best;
    double t_solver = 0, t_best = 0, gap = 0;  // t after the P4 re-solve, nats
    bool match = false;
    int candidates = 0, feasible_candidates = 0;
};

// Runs warmup AO iterations, then compares solve_assignment against every
// binary assignment (B^K of them), each followed by a beamformer re-solve.
OracleReport oracle_assignment(const scenario::SystemConfig& cfg, unsigned long seed, int warmup_iterations);
std::string oracle_json(const OracleReport& r);

// Parses "1,2,5-8" into seeds.
std::vector<unsigned long> parse_seeds(const std::string& text);

}  // namespace mris::expcli
