// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "dfrc/hermitian.hpp"
#include "dfrc/scene_model.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace dfrc {

enum class Sense { GreaterEqual, LessEqual, Equal };

enum class BlockRole { CommBeam, Probe, Other };

struct SdpConstraint {
    std::vector<HermitianMatrix> blocks;  // one per variable block, zero where absent
    Sense sense = Sense::GreaterEqual;
    double rhs = 0.0;
};

/// Separable complex SDP in the form
///   maximize   sum_l tr(C_l X_l)
///   subject to sum_l tr(A_ml X_l) (>=|<=|=) b_m,   X_l >= 0.
struct SdpInstance {
    std::vector<int> block_dims;
    std::vector<HermitianMatrix> objective_blocks;
    std::vector<SdpConstraint> constraints;
    std::vector<BlockRole> roles;
    /// Transmit budget when the instance comes from a beamforming problem;
    /// zero otherwise. Used to decide whether a probe block is empty.
    double power_budget = 0.0;

    /// Throws DimensionMismatch / InvalidArgument on inconsistent data.
    void validate() const;

    double objective_value(const std::vector<HermitianMatrix>& x) const;
    std::vector<double> constraint_values(const std::vector<HermitianMatrix>& x) const;
};

enum class SdpStatus { Optimal, Infeasible, MaxIter };

struct SdpSolution {
    std::vector<HermitianMatrix> primal_blocks;
    /// Non-negative multiplier per inequality row (lambda for >=, mu for <=),
    /// free for equality rows.
    std::vector<double> duals;
    double primal_objective = 0.0;
    double dual_objective = 0.0;
    SdpStatus status = SdpStatus::MaxIter;
    int iterations = 0;
    /// Set when status is Infeasible: multipliers in the same convention as
    /// `duals` with sum_l (C-free) dual slack PSD and a negative dual objective.
    std::vector<double> infeasibility_ray;
};

struct SdpOptions {
    enum class Field {
        RealEmbedding,  // [[Re, -Im], [Im, Re]] real symmetric blocks
        ComplexNative,  // Hermitian blocks directly; used to cross-check the embedding
    };
    Field field = Field::RealEmbedding;
    int max_iters = 100;
    double gap_tol = 1e-8;
    double feas_tol = 1e-9;
    double infeas_tol = 1e-8;
};

/// Dense primal-dual interior point (HKM direction, Mehrotra predictor-corrector).
/// Throws NumericalBreakdown when the iteration cannot proceed.
SdpSolution solve_sdp(const SdpInstance& instance, const SdpOptions& options = {});

struct SdpCertificate {
    double relative_gap = 0.0;      // |p - d| / (1 + |p|)
    double primal_residual = 0.0;   // worst row violation / (1 + |b_m|)
    double min_primal_eig = 0.0;    // most negative eigenvalue over X_l
    double max_dual_eig = 0.0;      // largest eigenvalue of C_l - sum_m y_m A_ml
    double dual_scale = 1.0;        // max(1, |C_l|_2), the yardstick for max_dual_eig
    double complementarity = 0.0;   // |sum_l tr(X_l Z_l)| / (1 + |p|)
    bool multipliers_signed = true; // lambda, mu >= 0
};

/// Recomputes the KKT quantities from the data and the returned primal/dual pair.
SdpCertificate check_certificate(const SdpInstance& instance, const SdpSolution& solution);

/// Maximise sum_k tr(Phi0 U_k) subject to
///   tr(H_k U_k)/Gamma_k - sum_{j!=k} tr(H_k U_j) >= 1  and  sum_k tr(U_k) <= P0.
/// Throws Infeasible for a zero channel and InvalidArgument for Gamma_k <= 0.
SdpInstance build_p33(const HermitianMatrix& phi0, const ChannelSet& channels,
                      const std::vector<double>& gammas, double p0);

/// As build_p33 with an extra probe block V that enters the objective and
/// the power row only.
SdpInstance build_p43(const HermitianMatrix& phi0, const ChannelSet& channels,
                      const std::vector<double>& gammas, double p0);

struct Rank1Beams {
    std::vector<CVector> beams;
    std::optional<CVector> probe;
    /// lambda_2 / lambda_1 of each block as returned by the solver, before repair.
    std::vector<double> raw_eig_ratios;
    bool repaired = false;
};

/// Dominant-eigenpair factorisation u = sqrt(lambda_1) q_1 of each block.
/// Blocks that are not numerically rank one are first passed through
/// reduce_rank. Throws RankDeficiencyUnrepaired if lambda_2 / lambda_1 of a
/// beam block still exceeds 1e-4 afterwards.
Rank1Beams extract_rank1(const SdpSolution& solution, const SdpInstance& instance);

/// Rank reduction for separable SDPs: repeatedly moves along a direction
/// X_l -> V_l (I - t D_l) V_l^H that leaves every constraint row and the
/// objective unchanged, until each block has rank one or no such direction
/// exists.
std::vector<HermitianMatrix> reduce_rank(const SdpInstance& instance, std::vector<HermitianMatrix> blocks);

/// lambda_2 / lambda_1 of a PSD block (0 for a zero or 1x1 block).
double eigen_ratio(const HermitianMatrix& block);

/// Plain-text listing of the instance (objective, constraint blocks,
/// senses, right-hand sides) for cross-checking with external solvers.
void write_listing(const SdpInstance& instance, std::ostream& os);

std::string to_string(SdpStatus s);

}  // namespace dfrc
