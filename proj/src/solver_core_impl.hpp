// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>

namespace mris::solvers::detail {

// build(model, restore) must return an object with a `core` member.
template <class Builder>
bool restore_offsets(const Instance& I, Offsets& off, Builder&& build, int& solves, double& seconds) {
    if (!off.any()) return true;
    conic::Model m;
    auto built = build(m, true);
    const Core& core = built.core;
    m.minimize(core.slack);
    auto sol = conic::solve(m);
    ++solves;
    seconds += sol.seconds;
    if (!sol.ok()) return false;
    // Keep part of the old margin so the following solve has a strictly feasible point.
    auto snap = [](double v, double cap) {
        if (v < 1e-7 * std::max(1.0, cap)) return 0.0;
        return std::min(cap, v + 0.1 * std::max(0.0, cap - v));
    };
    for (int k = 0; k < I.K; ++k)
        if (core.qos_slack[static_cast<std::size_t>(k)] >= 0)
            off.qos(k) = snap(sol.x(core.qos_slack[static_cast<std::size_t>(k)]), off.qos(k));
    for (std::size_t i = 0; i < core.sense_slack.size(); ++i) {
        auto [j, b] = core.sense_slack_index[i];
        off.sense(j, b) = snap(sol.x(core.sense_slack[i]), off.sense(j, b));
    }
    return true;
}

}  // namespace mris::solvers::detail
