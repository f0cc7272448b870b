// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "dfrc/radar_core.hpp"
#include "dfrc/sdp.hpp"

#include <vector>

namespace dfrc {

struct MultiCuProblem {
    Scene scene;
    ArrayGeometry geom;
    ChannelSet channels;
    std::vector<double> gammas;       // linear, one per user
    double p0 = 1.0;                  // linear
    double convergence_delta = 1e-3;  // on the linear radar SINR
    int max_iters = 50;
    bool dedicated = false;
    SdpOptions sdp{};

    /// Throws DimensionMismatch / InvalidArgument.
    void validate() const;
};

/// Sequential SDR without a probing stream. Each outer step freezes
/// Phi at the previous beams, solves the relaxation and factors the
/// blocks back into beams. Throws Infeasible, NumericalBreakdown,
/// RankDeficiencyUnrepaired or NoConvergence.
BeamformingSolution algorithm2(const MultiCuProblem& problem);

/// As algorithm2 with an additional probing stream v that the users cancel.
BeamformingSolution algorithm3(const MultiCuProblem& problem);

/// Dispatches on problem.dedicated.
BeamformingSolution solve_multi_cu(const MultiCuProblem& problem);

}  // namespace dfrc
