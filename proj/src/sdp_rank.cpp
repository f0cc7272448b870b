// SPDX-License-Identifier: Apache-2.0
#include "dfrc/sdp.hpp"

#include "dfrc/errors.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>

namespace dfrc {

namespace {

constexpr double kRankTol = 1e-6;    // lambda_2/lambda_1 above this triggers reduction
constexpr double kDropTol = 1e-9;    // eigenvalues below this fraction are treated as zero
constexpr double kRepairTol = 1e-4;  // give up above this ratio after reduction

struct Factor {
    CMatrix v;  // n x r, X = V V^H
};

Factor factorize(const HermitianMatrix& x, double scale) {
    const auto s = eig_hermitian(x);
    const auto n = s.values.size();
    std::vector<Eigen::Index> keep;
    for (Eigen::Index i = n - 1; i >= 0; --i)
        if (s.values[i] > kDropTol * scale) keep.push_back(i);
    Factor f{CMatrix(x.dim(), static_cast<Eigen::Index>(keep.size()))};
    for (std::size_t c = 0; c < keep.size(); ++c)
        f.v.col(static_cast<Eigen::Index>(c)) = s.vectors.col(keep[c]) * std::sqrt(s.values[keep[c]]);
    return f;
}

// Real coordinates of an r x r Hermitian matrix: r diagonal entries, then
// (re, im) of each strictly upper entry.
int hermitian_params(Eigen::Index r) { return static_cast<int>(r * r); }

void hermitian_coeffs(const CMatrix& b, Eigen::Ref<RVector> out) {
    const auto r = b.rows();
    int p = 0;
    for (Eigen::Index i = 0; i < r; ++i) out[p++] = b(i, i).real();
    for (Eigen::Index i = 0; i < r; ++i)
        for (Eigen::Index j = i + 1; j < r; ++j) {
            out[p++] = 2.0 * b(i, j).real();
            out[p++] = -2.0 * b(i, j).imag();
        }
}

CMatrix hermitian_from(const RVector& params, int offset, Eigen::Index r) {
    CMatrix d = CMatrix::Zero(r, r);
    int p = offset;
    for (Eigen::Index i = 0; i < r; ++i) d(i, i) = params[p++];
    for (Eigen::Index i = 0; i < r; ++i)
        for (Eigen::Index j = i + 1; j < r; ++j) {
            // Re tr(B D) pairs 2 Re B_ij with Re D_ji and -2 Im B_ij with Im D_ji
            const double re = params[p++];
            const double im = params[p++];
            d(j, i) = cplx(re, im);
            d(i, j) = cplx(re, -im);
        }
    return d;
}

double block_scale(const std::vector<HermitianMatrix>& blocks) {
    double s = 0;
    for (const auto& b : blocks) s = std::max(s, b.trace());
    return s > 0 ? s : 1.0;
}

}  // namespace

double eigen_ratio(const HermitianMatrix& block) {
    if (block.dim() < 2) return 0.0;
    const auto s = eig_hermitian(block);
    const auto n = s.values.size();
    const double l1 = s.values[n - 1];
    if (!(l1 > 0)) return 0.0;
    return std::max(0.0, s.values[n - 2]) / l1;
}

std::vector<HermitianMatrix> reduce_rank(const SdpInstance& inst, std::vector<HermitianMatrix> blocks) {
    const std::size_t nb = blocks.size();
    if (nb != inst.block_dims.size()) throw DimensionMismatch("block count");

    for (int pass = 0; pass < 64; ++pass) {
        const double scale = block_scale(blocks);
        std::vector<Factor> f;
        bool all_rank1 = true;
        for (auto& b : blocks) {
            f.push_back(factorize(b, scale));
            all_rank1 = all_rank1 && f.back().v.cols() <= 1;
            // drop the numerically zero part so the returned blocks have the rank seen here
            const CMatrix x = f.back().v * f.back().v.adjoint();
            b = HermitianMatrix((x + x.adjoint()) * 0.5);
        }
        if (all_rank1) break;

        std::vector<int> offset(nb + 1, 0);
        for (std::size_t l = 0; l < nb; ++l) offset[l + 1] = offset[l] + hermitian_params(f[l].v.cols());
        const int unknowns = offset[nb];
        // constraint rows plus the objective
        const int rows = static_cast<int>(inst.constraints.size()) + 1;
        if (unknowns <= rows) break;

        RMatrix sys = RMatrix::Zero(rows, unknowns);
        for (int m = 0; m < rows; ++m) {
            for (std::size_t l = 0; l < nb; ++l) {
                const auto r = f[l].v.cols();
                if (r == 0) continue;
                const HermitianMatrix& a = m + 1 == rows ? inst.objective_blocks[l] : inst.constraints[m].blocks[l];
                const CMatrix b = f[l].v.adjoint() * a.matrix() * f[l].v;
                RVector coeffs(hermitian_params(r));
                hermitian_coeffs(b, coeffs);
                sys.row(m).segment(offset[l], hermitian_params(r)) = coeffs.transpose();
            }
        }
        Eigen::JacobiSVD<RMatrix> svd(sys, Eigen::ComputeFullV);
        const RVector dir = svd.matrixV().col(unknowns - 1);

        std::vector<CMatrix> deltas(nb);
        double top = 0, bottom = 0;
        for (std::size_t l = 0; l < nb; ++l) {
            const auto r = f[l].v.cols();
            if (r == 0) continue;
            deltas[l] = hermitian_from(dir, offset[l], r);
            const auto ev = eig_hermitian(HermitianMatrix(deltas[l])).values;
            top = std::max(top, ev[ev.size() - 1]);
            bottom = std::min(bottom, ev[0]);
        }
        // step to the first eigenvalue that hits zero; flip the direction if
        // only negative eigenvalues exist
        const double sign = top >= -bottom ? 1.0 : -1.0;
        const double t = 1.0 / std::max(top, -bottom);
        for (std::size_t l = 0; l < nb; ++l) {
            const auto r = f[l].v.cols();
            if (r == 0) {
                blocks[l] = HermitianMatrix::zero(inst.block_dims[l]);
                continue;
            }
            const CMatrix shrink = CMatrix::Identity(r, r) - (sign * t) * deltas[l];
            CMatrix x = f[l].v * shrink * f[l].v.adjoint();
            blocks[l] = HermitianMatrix((x + x.adjoint()) * 0.5);
        }
    }
    return blocks;
}

Rank1Beams extract_rank1(const SdpSolution& solution, const SdpInstance& instance) {
    if (solution.status != SdpStatus::Optimal) throw InvalidArgument("rank-1 extraction needs an optimal solution");
    if (solution.primal_blocks.size() != instance.block_dims.size()) throw DimensionMismatch("block count");

    Rank1Beams out;
    std::vector<HermitianMatrix> blocks = solution.primal_blocks;
    bool needs_repair = false;
    for (std::size_t l = 0; l < blocks.size(); ++l) {
        out.raw_eig_ratios.push_back(eigen_ratio(blocks[l]));
        if (out.raw_eig_ratios.back() > kRankTol) needs_repair = true;
    }
    if (needs_repair) {
        blocks = reduce_rank(instance, std::move(blocks));
        out.repaired = true;
    }

    const double budget = instance.power_budget > 0 ? instance.power_budget : block_scale(blocks);
    for (std::size_t l = 0; l < blocks.size(); ++l) {
        const double ratio = eigen_ratio(blocks[l]);
        const auto top = dominant_eigpair(blocks[l]);
        const CVector vec = std::sqrt(std::max(top.value, 0.0)) * top.vector;
        switch (instance.roles[l]) {
            case BlockRole::CommBeam:
                if (ratio > kRepairTol) throw RankDeficiencyUnrepaired("beam block is not rank one after reduction");
                out.beams.push_back(vec);
                break;
            case BlockRole::Probe:
                if (blocks[l].trace() > 1e-8 * budget) {
                    if (ratio > kRepairTol) throw RankDeficiencyUnrepaired("probe block is not rank one after reduction");
                    out.probe = vec;
                }
                break;
            case BlockRole::Other:
                break;
        }
    }
    return out;
}

}  // namespace dfrc
