// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "mris/scenario.hpp"
#include "mris/types.hpp"

namespace mris::channel {

struct ChannelSet {
    CMat G;                          // M x L, BS -> MRIS
    std::vector<CVec> h_user;        // K vectors of length M, MRIS -> user
    std::vector<CVec> h_eve_nominal; // J vectors of length M, filled from the uncertainty module
    std::vector<double> eps_eve;     // J sphere radii matching h_eve_nominal
    double kappa_BR = 0, kappa_RU = 0, kappa_RE = 0;
    double theta_t = 0;              // BS departure angle toward the MRIS (rad)
    double d_BR = 0;                 // m
};

// a_BS entry l (0-based) = exp(j 2 pi d_B / lambda * l * sin theta_t).
CVec steer_bs(double theta_t, int L, double d_B, double lambda_c);

// Spatial frequencies of the planar MRIS array for a direction.
struct SpatialFreq {
    double dr = 0, dc = 0;
};
SpatialFreq spatial_freq(double azimuth, double elevation, double d_R, double lambda_c);

// Kronecker product of row and column ramps, entry m = m_r * M_c + m_c (0-based).
CVec steer_mris(double azimuth, double elevation, int M_r, int M_c, double d_R, double lambda_c);

// Departure elevation of the BS -> MRIS direction for the vertical BS array.
double bs_departure_angle(const scenario::NodeLayout& layout);

ChannelSet synthesize_channels(const scenario::SystemConfig& cfg, const scenario::NodeLayout& layout, Rng& rng);

// Row r with r_l = sum_m u_m conj(h_m) G(m, l), so that the received sample is r^T w.
CVec effective_channel(const CVec& h_rx, const CVec& u_b, const CMat& G);

// Received amplitude r^T w for an effective-channel row.
inline cd apply_row(const CVec& row, const CVec& w) { return row.transpose() * w; }

// Replayable text dump (JSON with [re, im] pairs, row-major matrices).
std::string dump_channels(const ChannelSet& ch);
ChannelSet load_channels(const std::string& text);

}  // namespace mris::channel
