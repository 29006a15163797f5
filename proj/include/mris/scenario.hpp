// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mris/types.hpp"

namespace mris::scenario {

// Node placement mode: rejection sampling in the box, or explicit polar
// coordinates (range m, azimuth deg, elevation deg) measured from the MRIS.
enum class Placement { Random, Polar };

// Which convex model replaces the worst-case leakage constraint.
//   soc:    exact worst case |h^H X| + eps||X|| as second-order cones
//   schur:  the same set written as one S-procedure LMI
//   taylor: Taylor lower bound of the leakage plus a linearized budget
enum class LeakageModel { Soc, Schur, Taylor };

struct SystemConfig {
    // [system]
    int L = 8;
    int M_r = 2, M_c = 2;
    int N_r = 1, N_c = 2;  // N_r = N_c = 0 selects the single-layer baseline
    int K = 2;
    int J = 1;
    double P_max = 0.1;        // W
    double sigma2_U = 1e-11;   // W
    double sigma2_E = 1e-11;   // W
    double beta0 = 1e-3;       // linear
    double kappa_BR = 3.1622776601683795;
    double kappa_RU = 3.1622776601683795;
    double kappa_RE = 3.1622776601683795;
    double lambda_c = 0.1;     // m
    double d_R = 0.025;        // m
    double d_B = 0.05;         // m
    std::vector<double> Gamma_user{0.35};   // nats, broadcast when size 1
    std::vector<double> Gamma_sense{};      // W, empty: scale rule below
    double Gamma_sense_scale = 0.1;

    // [geometry]
    Point3 bs_pos{0.0, 0.0, 10.0};
    Point3 mris_pos{0.0, 10.0, 15.0};
    Placement placement = Placement::Random;
    std::vector<Point3> user_polar;  // (d, az deg, el deg)
    std::vector<Point3> eve_polar;
    double box_x_min = -20, box_x_max = 20;
    double box_y_min = 20, box_y_max = 70;
    double box_z_min = 0, box_z_max = 10;
    double d_UU = 5, d_EE = 10, d_UE = 8;
    long placement_budget = 100000;

    // [uncertainty]
    double D_RE = 1.0;                 // m
    double Theta_RE = deg2rad(1.0);    // rad
    double Psi_RE = deg2rad(1.0);      // rad
    double eps_nlos = -1.0;            // < 0: eps_nlos_scale * sqrt(kappa_RE)
    double eps_nlos_scale = 0.1;
    int dpsi_grid = 64;

    // [algorithm]
    double rho1 = 1.0;
    double rho2_init = 0.5;
    double rho3_init = 0.5;
    double varpi1 = 0.85;
    double bigM1 = 0.0;  // 0: automatic
    double bigM2 = 0.0;
    double tol_ao = 1e-3;
    double tol_pdd_inner = 1e-3;
    double tol_pdd_outer = 1e-4;
    double pdd_threshold_init = 1e-2;
    int tau_max = 30;
    int pdd_outer_max = 60;
    int pdd_inner_max = 8;
    int assign_rounds = 10;
    int candidate_rounds = 3;
    int assign_local_search = 1;
    LeakageModel leakage_model = LeakageModel::Soc;

    // [experiment]
    unsigned long seed = 1;
    int mc_samples = 1000;

    int M() const { return M_r * M_c; }
    int N() const { return N_r * N_c; }
    double eps_nlos_value() const;
    double gamma_user(int k) const;
};

struct NodeLayout {
    Point3 bs_pos;
    Point3 mris_pos;
    std::vector<Point3> user_pos;
    std::vector<Point3> eve_pos;
};

struct PolarView {
    double d = 0;          // m
    double azimuth = 0;    // rad, (-pi, pi]
    double elevation = 0;  // rad, [-pi/2, pi/2]
};

// Parses an INI-style file with sections [system], [geometry], [uncertainty],
// [algorithm], [experiment]. dB/dBm keys are converted to linear units.
SystemConfig load_config(const std::string& path);
SystemConfig parse_config(const std::string& text);
// Writes every field in linear units so that parse(dump(c)) == c exactly.
std::string dump_config(const SystemConfig& cfg);
// Applies "section.key=value" (or "key=value" when the key is unique).
void apply_override(SystemConfig& cfg, const std::string& assignment);
void validate(const SystemConfig& cfg);
bool equal_configs(const SystemConfig& a, const SystemConfig& b);
// Stable 64-bit hash of the dumped config, hex encoded.
std::string config_hash(const SystemConfig& cfg);

NodeLayout place_nodes(const SystemConfig& cfg, Rng& rng);
PolarView polar_from_mris(const NodeLayout& layout, const Point3& point);
Point3 cartesian_from_polar(const Point3& origin, const PolarView& pv);

}  // namespace mris::scenario
