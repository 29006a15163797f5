// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "mris/scenario.hpp"
#include "mris/types.hpp"

namespace mris::uncertainty {

struct EveUncertainty {
    double d_bar = 50;      // m
    double theta_bar = 0;   // nominal azimuth (rad)
    double phi_bar = 0;     // nominal elevation (rad)
    double D = 0;           // m
    double Theta = 0;       // rad
    double Psi = 0;         // rad
    std::vector<double> eps_nlos;  // per element; one entry is broadcast
    double kappa = 1;
    double beta0 = 1e-3;
    double d_R = 0.025;
    double lambda_c = 0.1;

    double eps(int m) const { return eps_nlos.size() == 1 ? eps_nlos[0] : eps_nlos.at(static_cast<std::size_t>(m)); }
};

struct ElementBound {
    double R_inf = 0, R_sup = 0;
    double r_inf = 0, r_sup = 0;
    double delta_psi = 0;
    double R_out = 0, R_inn = 0;
    double R_center = 0;             // R^o
    double r_tilde = 0;              // radius actually used (safe)
    double r_tilde_closed_form = 0;  // circle through R_inn and R_out e^{+-j dpsi}
    double A_act = 0, A_saf = 0;
    bool degenerate = false;
};

struct BoundGeometry {
    double beta1 = 0, beta2 = 0;
    std::vector<ElementBound> elem;  // m = m_r * M_c + m_c
};

struct RobustChannel {
    CVec h_nominal;
    double eps_sphere = 0;
};

struct Tightness {
    double eta = 0;
    double eps_norm = 0;
};

// Worst-case phase deviation for element offset (m_r, m_c) (0-based), maximized
// over a grid x grid sampling of the angular box boundary plus its corners.
double phase_perturbation_bound(const EveUncertainty& unc, int m_r, int m_c, int grid);

BoundGeometry bound_geometry(const EveUncertainty& unc, int M_r, int M_c, int grid = 64);

Tightness tightness_metrics(const BoundGeometry& geom);

RobustChannel robust_channel(const EveUncertainty& unc, const BoundGeometry& geom, int M_r, int M_c);

CVec sample_uncertain_channel(const EveUncertainty& unc, int M_r, int M_c, Rng& rng);

// Builds the per-Eve uncertainty description from the configuration and the
// nominal (estimated) Eve position.
EveUncertainty from_config(const scenario::SystemConfig& cfg, const scenario::NodeLayout& layout, int j);

}  // namespace mris::uncertainty
