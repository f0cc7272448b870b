// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "dfrc/radar_core.hpp"

namespace dfrc {

struct SingleCuProblem {
    Scene scene;
    ArrayGeometry geom;
    CVector h;
    double gamma = 0.0;              // linear SINR threshold
    double p0 = 1.0;                 // linear power budget
    double convergence_delta = 1e-3; // on the linear radar SINR
    int max_iters = 50;

    /// Gamma <= P0 |h|^2.
    bool feasible() const;
};

enum class ClosedFormRegime {
    ConstraintInactive,  // u = sqrt(P0) g
    ConstraintActive,    // u = alpha h_hat + beta g_perp_hat
};

/// Which branch applies for the given gain matrix. Throws Infeasible when
/// gamma exceeds what maximum-ratio transmission can deliver.
ClosedFormRegime closed_form_regime(const HermitianMatrix& phi0, const CVector& h, double gamma, double p0);

/// Maximiser of u^H Phi0 u subject to |h^H u|^2 >= gamma and |u|^2 <= p0.
CVector closed_form_beam(const HermitianMatrix& phi0, const CVector& h, double gamma, double p0);

/// Evaluates one branch formula regardless of which branch is optimal.
/// The active branch needs gamma <= P0 |h|^2 and a g that is not parallel to h.
CVector closed_form_branch(const HermitianMatrix& phi0, const CVector& h, double gamma, double p0,
                           ClosedFormRegime regime);

/// Sequential optimisation: alternate Phi0 <- Phi(u) and the closed form.
/// Starts from the uniform beam at full power. Throws Infeasible or
/// NoConvergence.
BeamformingSolution algorithm1(const SingleCuProblem& problem);

/// Single user with a dedicated probing stream allowed. The optimum never
/// uses the probe, so this returns algorithm1's beam with v = 0 reported
/// explicitly.
BeamformingSolution dedicated_single_cu(const SingleCuProblem& problem);

}  // namespace dfrc
