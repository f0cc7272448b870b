// SPDX-License-Identifier: Apache-2.0
#include "dfrc/multi_cu.hpp"

#include "dfrc/errors.hpp"

#include <algorithm>
#include <cmath>

namespace dfrc {

namespace {

constexpr double kSinrSlack = 1e-5;
constexpr double kPowerSlack = 1e-6;
// The probe-free problem wins ties so that an unused probe is reported as absent.
constexpr double kTieTol = 1e-7;

struct Beams {
    std::vector<CVector> u;
    std::optional<CVector> v;
    double objective = 0.0;
};

double total_power(const Beams& b) {
    double p = 0;
    for (const auto& u : b.u) p += u.squaredNorm();
    if (b.v) p += b.v->squaredNorm();
    return p;
}

void scale_all(Beams& b, double s) {
    for (auto& u : b.u) u *= s;
    if (b.v) *b.v *= s;
}

// Factorisation is exact only for exactly rank-one blocks, so the SINR rows
// are re-evaluated and any user that slipped below its target is topped up.
void enforce_targets(Beams& b, const MultiCuProblem& p) {
    const double budget = p.p0;
    double power = total_power(b);
    if (power > budget) {
        if (power > budget * (1 + kPowerSlack)) throw NumericalBreakdown("relaxation returned beams above the budget");
        scale_all(b, std::sqrt(budget / power));
    }

    auto sinrs = cu_sinr(p.channels, b.u);
    for (std::size_t k = 0; k < b.u.size(); ++k) {
        if (sinrs[k] >= p.gammas[k] * (1 - kSinrSlack)) continue;
        const double own = std::norm(p.channels[k].dot(b.u[k]));
        if (own <= 0) throw RankDeficiencyUnrepaired("recovered beam carries no signal to its user");
        b.u[k] *= std::sqrt(p.gammas[k] / sinrs[k]);
    }
    sinrs = cu_sinr(p.channels, b.u);
    for (std::size_t k = 0; k < b.u.size(); ++k)
        if (sinrs[k] < p.gammas[k] * (1 - kSinrSlack))
            throw RankDeficiencyUnrepaired("SINR target lost after rank-one recovery");
    power = total_power(b);
    if (power > budget * (1 + 1e-9)) throw RankDeficiencyUnrepaired("no power left to restore the SINR targets");
}

Beams solve_relaxation(const SdpInstance& inst, const SdpOptions& opt) {
    const auto sol = solve_sdp(inst, opt);
    if (sol.status == SdpStatus::Infeasible) throw Infeasible("SINR targets cannot be met within the power budget");
    if (sol.status != SdpStatus::Optimal) throw NumericalBreakdown("relaxation stopped at " + to_string(sol.status));
    auto r = extract_rank1(sol, inst);
    return {std::move(r.beams), std::move(r.probe), sol.primal_objective};
}

Beams outer_step(const MultiCuProblem& p, const HermitianMatrix& phi0) {
    auto plain = solve_relaxation(build_p33(phi0, p.channels, p.gammas, p.p0), p.sdp);
    if (p.dedicated) {
        auto probed = solve_relaxation(build_p43(phi0, p.channels, p.gammas, p.p0), p.sdp);
        if (probed.v && plain.objective < probed.objective * (1 - kTieTol)) return probed;
    }
    return plain;
}

BeamformingSolution run(const MultiCuProblem& problem) {
    problem.validate();
    const auto& p = problem;
    const int n = p.geom.n_tx;
    const std::size_t k_users = p.channels.size();

    const double streams = static_cast<double>(k_users + (p.dedicated ? 1 : 0));
    const CVector uniform = CVector::Constant(n, cplx(std::sqrt(p.p0 / (streams * n)), 0.0));
    Beams cur;
    cur.u.assign(k_users, uniform);
    if (p.dedicated) cur.v = uniform;

    auto radar = [&](const Beams& b) {
        const auto r = TransmitCovariance::from_beams(b.u, b.v);
        return avg_radar_sinr(radar_gain_matrix(p.scene, r, p.geom), r);
    };

    BeamformingSolution sol;
    sol.trace.push_back(radar(cur));
    bool converged = false;
    for (int m = 1; m <= p.max_iters; ++m) {
        const auto phi0 = radar_gain_matrix(p.scene, TransmitCovariance::from_beams(cur.u, cur.v), p.geom);
        cur = outer_step(p, phi0);
        enforce_targets(cur, p);
        sol.trace.push_back(radar(cur));
        sol.iterations = m;
        if (std::abs(sol.trace[m] - sol.trace[m - 1]) <= p.convergence_delta) {
            converged = true;
            break;
        }
    }

    sol.comm_beams = cur.u;
    if (p.dedicated) sol.probe_beam = cur.v ? *cur.v : CVector::Zero(n);
    finalize_solution(sol, p.scene, p.geom, p.channels, p.p0);
    if (!converged) throw NoConvergence("outer loop hit the iteration cap", sol);
    return sol;
}

}  // namespace

void MultiCuProblem::validate() const {
    if (channels.n_tx() != geom.n_tx) throw DimensionMismatch("channel length differs from N_t");
    if (gammas.size() != channels.size()) throw DimensionMismatch("one SINR target per user required");
    for (double g : gammas)
        if (!(g > 0) || !std::isfinite(g)) throw InvalidArgument("SINR targets must be positive and finite");
    if (!(p0 > 0) || !std::isfinite(p0)) throw InvalidArgument("power budget must be positive");
    if (!(convergence_delta > 0)) throw InvalidArgument("convergence threshold must be positive");
    if (max_iters < 1) throw InvalidArgument("max_iters must be at least 1");
}

BeamformingSolution algorithm2(const MultiCuProblem& problem) {
    auto p = problem;
    p.dedicated = false;
    return run(p);
}

BeamformingSolution algorithm3(const MultiCuProblem& problem) {
    auto p = problem;
    p.dedicated = true;
    return run(p);
}

BeamformingSolution solve_multi_cu(const MultiCuProblem& problem) {
    return problem.dedicated ? algorithm3(problem) : algorithm2(problem);
}

}  // namespace dfrc
