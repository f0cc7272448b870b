// SPDX-License-Identifier: Apache-2.0
#include "dfrc/single_cu.hpp"

#include <algorithm>
#include <cmath>

namespace dfrc {

namespace {

void validate(const HermitianMatrix& phi0, const CVector& h, double gamma, double p0) {
    if (phi0.dim() != h.size()) throw DimensionMismatch("Phi0 and h differ in size");
    if (h.norm() == 0.0) throw InvalidArgument("channel vector is zero");
    if (!(gamma >= 0.0) || !std::isfinite(gamma)) throw InvalidArgument("gamma must be finite and >= 0");
    if (!(p0 > 0.0) || !std::isfinite(p0)) throw InvalidArgument("power budget must be positive");
}

cplx unit_phase(cplx z) {
    const double m = std::abs(z);
    return m > 0.0 ? z / m : cplx(1.0, 0.0);
}

SingleCuProblem checked(const SingleCuProblem& p) {
    if (p.h.size() != p.geom.n_tx) throw DimensionMismatch("channel length differs from N_t");
    if (!(p.convergence_delta > 0.0)) throw InvalidArgument("convergence threshold must be positive");
    if (p.max_iters < 1) throw InvalidArgument("max_iters must be at least 1");
    if (!p.feasible()) throw Infeasible("SINR target exceeds P0 |h|^2");
    return p;
}

}  // namespace

bool SingleCuProblem::feasible() const { return gamma <= p0 * h.squaredNorm() * (1.0 + 1e-12); }

ClosedFormRegime closed_form_regime(const HermitianMatrix& phi0, const CVector& h, double gamma, double p0) {
    validate(phi0, h, gamma, p0);
    const double mrt = p0 * h.squaredNorm();
    if (gamma > mrt * (1.0 + 1e-12)) throw Infeasible("SINR target exceeds maximum-ratio transmission");
    const CVector g = dominant_eigpair(phi0).vector;
    // relative slack so that h parallel to g lands in the inactive branch despite rounding
    if (gamma <= p0 * std::norm(h.dot(g)) * (1.0 + 1e-12)) return ClosedFormRegime::ConstraintInactive;
    return ClosedFormRegime::ConstraintActive;
}

CVector closed_form_branch(const HermitianMatrix& phi0, const CVector& h, double gamma, double p0,
                           ClosedFormRegime regime) {
    validate(phi0, h, gamma, p0);
    const CVector g = dominant_eigpair(phi0).vector;
    if (regime == ClosedFormRegime::ConstraintInactive) return std::sqrt(p0) * g;

    const double h2 = h.squaredNorm();
    const CVector h_hat = h / std::sqrt(h2);
    const cplx alpha_g = h_hat.dot(g);
    const CVector g_perp = g - alpha_g * h_hat;
    const double beta_g = g_perp.norm();  // real and non-negative by construction of g_perp_hat
    if (beta_g <= 1e-14) throw InvalidArgument("dominant eigenvector is parallel to the channel");
    const CVector g_perp_hat = g_perp / beta_g;

    const double in_h = gamma / h2;
    const cplx alpha = std::sqrt(in_h) * unit_phase(alpha_g);
    const double beta = std::sqrt(std::max(0.0, p0 - in_h));
    return alpha * h_hat + beta * g_perp_hat;
}

CVector closed_form_beam(const HermitianMatrix& phi0, const CVector& h, double gamma, double p0) {
    return closed_form_branch(phi0, h, gamma, p0, closed_form_regime(phi0, h, gamma, p0));
}

BeamformingSolution algorithm1(const SingleCuProblem& problem) {
    const auto p = checked(problem);
    const ChannelSet channels({p.h});
    const int n = p.geom.n_tx;

    CVector u = CVector::Constant(n, cplx(std::sqrt(p.p0 / n), 0.0));
    auto radar = [&](const CVector& beam) {
        const auto r = TransmitCovariance::from_beams({beam});
        return avg_radar_sinr(radar_gain_matrix(p.scene, r, p.geom), r);
    };

    BeamformingSolution sol;
    sol.trace.push_back(radar(u));
    bool converged = false;
    for (int m = 1; m <= p.max_iters; ++m) {
        const auto phi0 = radar_gain_matrix(p.scene, TransmitCovariance::from_beams({u}), p.geom);
        u = closed_form_beam(phi0, p.h, p.gamma, p.p0);
        sol.trace.push_back(radar(u));
        sol.iterations = m;
        if (std::abs(sol.trace[m] - sol.trace[m - 1]) <= p.convergence_delta) {
            converged = true;
            break;
        }
    }

    sol.comm_beams = {u};
    finalize_solution(sol, p.scene, p.geom, channels, p.p0);
    if (!converged) throw NoConvergence("algorithm1 hit the iteration cap", sol);
    return sol;
}

BeamformingSolution dedicated_single_cu(const SingleCuProblem& problem) {
    auto sol = algorithm1(problem);
    sol.probe_beam = CVector::Zero(problem.geom.n_tx);
    sol.probe_power_fraction = 0.0;
    return sol;
}

}  // namespace dfrc
