// SPDX-License-Identifier: Apache-2.0
// Shared conic model of the secrecy, QoS, leakage and sensing constraints for
// one block update. Each transmitted stream is an affine map of the live
// variable to the user-scale signal diag(u_b) G w.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mris/solvers.hpp"

namespace mris::solvers::detail {

struct Stream {
    int user = -1;  // -1 marks the AN stream
    conic::CVecAffine X;
    CVec X0;  // value at the expansion point
};

struct BeamModel {
    int b = 0;
    std::vector<Stream> streams;
};

struct CoreOptions {
    std::vector<int> users;       // users whose secrecy and QoS are modeled
    bool sensing = true;
    bool restore = false;         // slack variables bounded by the offsets
    double qos_margin = 0;        // nats added to each QoS floor
    double sense_margin = 0;      // fraction of each sensing floor added to it
};

struct PendingCert {
    std::optional<robust::ParamForm> q;  // LMI certified forms
    conic::CVecAffine leak_X;            // exact leakage certificates (cone model)
    CVec hbar;
    conic::Affine rhs, rhs_b;            // rhs, or rhs * rhs_b for leakage products
    bool product = false;
    robust::Sense sense = robust::Sense::Upper;
    double eps = 0;
    std::string tag;
};

struct Core {
    int t = -1;
    std::vector<int> v;  // per modeled user
    conic::Affine slack;  // restoration objective (normalized)
    std::vector<int> qos_slack, sense_slack;  // variable ids (restore mode)
    std::vector<std::pair<int, int>> sense_slack_index;  // (j, b)
    std::vector<int> lambdas;
    std::vector<PendingCert> certs;
};

// Anchors come from the exact evaluation of the expansion design.
Core add_core(conic::Model& m, const Instance& I, const std::vector<BeamModel>& beams, const Evaluation& anchor,
              const Offsets& off, const CoreOptions& opt);

std::vector<Certificate> realize(const std::vector<PendingCert>& pending, const RVec& x);

double max_violation(const std::vector<Certificate>& certs);

// Solves the restoration phase when offsets are active and shrinks them in place.
// Returns false if the conic engine failed.
template <class Builder>
bool restore_offsets(const Instance& I, Offsets& off, Builder&& build, int& solves, double& seconds);

}  // namespace mris::solvers::detail

#include "solver_core_impl.hpp"
