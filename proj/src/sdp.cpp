// SPDX-License-Identifier: Apache-2.0
#include "dfrc/sdp.hpp"

#include "sdp_ipm.hpp"

#include "dfrc/errors.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <ostream>

namespace dfrc {

namespace {

double trace_inner(const HermitianMatrix& a, const HermitianMatrix& x) {
    return a.matrix().conjugate().cwiseProduct(x.matrix()).sum().real();
}

RMatrix embed(const CMatrix& m) {
    const auto n = m.rows();
    RMatrix r(2 * n, 2 * n);
    r.topLeftCorner(n, n) = m.real();
    r.topRightCorner(n, n) = -m.imag();
    r.bottomLeftCorner(n, n) = m.imag();
    r.bottomRightCorner(n, n) = m.real();
    return r;
}

CMatrix unembed(const RMatrix& r) {
    const auto n = r.rows() / 2;
    const RMatrix re = (r.topLeftCorner(n, n) + r.bottomRightCorner(n, n)) * 0.5;
    const RMatrix im = (r.bottomLeftCorner(n, n) - r.topRightCorner(n, n)) * 0.5;
    CMatrix m(n, n);
    m.real() = re;
    m.imag() = im;
    return (m + m.adjoint()) * 0.5;
}

bool is_zero(const HermitianMatrix& m) { return m.matrix().isZero(0.0); }

// Converts the instance to equality form with one 1x1 slack block per
// inequality row, normalises each row and the objective, and hands it to the
// interior point in the requested field.
struct Scaling {
    std::vector<double> row;  // row m divided by row[m]
    double b = 1.0;           // X_scaled = X / b
    double c = 1.0;           // C_scaled = C / c
};

template <class Scalar>
ipm::Problem<Scalar> lower(const SdpInstance& inst, const Scaling& sc,
                           std::vector<int>& slack_of_row) {
    using M = ipm::Mat<Scalar>;
    constexpr bool real_field = std::is_same_v<Scalar, double>;
    const std::size_t nb = inst.block_dims.size();
    const std::size_t nr = inst.constraints.size();

    auto convert = [&](const HermitianMatrix& h) -> M {
        if constexpr (real_field) {
            return embed(h.matrix()) * 0.5;  // <emb(A)/2, emb(X)> = Re tr(A X)
        } else {
            return h.matrix();
        }
    };

    ipm::Problem<Scalar> p;
    for (int d : inst.block_dims) p.dims.push_back(real_field ? 2 * d : d);
    slack_of_row.assign(nr, -1);
    for (std::size_t m = 0; m < nr; ++m) {
        if (inst.constraints[m].sense != Sense::Equal) {
            slack_of_row[m] = static_cast<int>(p.dims.size());
            p.dims.push_back(1);
        }
    }
    const std::size_t total = p.dims.size();

    p.c.resize(total);
    for (std::size_t l = 0; l < total; ++l) p.c[l] = M::Zero(p.dims[l], p.dims[l]);
    for (std::size_t l = 0; l < nb; ++l) p.c[l] = convert(inst.objective_blocks[l]) / sc.c;

    p.a.assign(nr, std::vector<M>(total));
    p.b.resize(static_cast<Eigen::Index>(nr));
    for (std::size_t m = 0; m < nr; ++m) {
        const auto& row = inst.constraints[m];
        for (std::size_t l = 0; l < nb; ++l)
            if (!is_zero(row.blocks[l])) p.a[m][l] = convert(row.blocks[l]) * (sc.b / sc.row[m]);
        if (slack_of_row[m] >= 0) {
            const double sign = row.sense == Sense::GreaterEqual ? -1.0 : 1.0;
            p.a[m][slack_of_row[m]] = M::Constant(1, 1, Scalar(sign * sc.b / sc.row[m]));
        }
        p.b[static_cast<Eigen::Index>(m)] = row.rhs / sc.row[m];
    }
    return p;
}

Scaling make_scaling(const SdpInstance& inst) {
    Scaling sc;
    double cn = 0;
    for (const auto& c : inst.objective_blocks) cn += c.matrix().squaredNorm();
    sc.c = cn > 0 ? std::sqrt(cn) : 1.0;
    double bmax = 0;
    for (const auto& row : inst.constraints) {
        double rn = row.sense == Sense::Equal ? 0.0 : 1.0;
        for (const auto& blk : row.blocks) rn += blk.matrix().squaredNorm();
        rn = std::sqrt(rn);
        sc.row.push_back(rn > 0 ? rn : 1.0);
        bmax = std::max(bmax, std::abs(row.rhs) / sc.row.back());
    }
    sc.b = std::max(1.0, bmax);
    return sc;
}

double to_multiplier(Sense s, double y) {
    // internal dual sign: Z = sum y_m A_m - C, so >= rows carry y <= 0
    return s == Sense::GreaterEqual ? -y : y;
}

double from_multiplier(Sense s, double d) { return s == Sense::GreaterEqual ? -d : d; }

template <class Scalar>
SdpSolution solve_in(const SdpInstance& inst, const SdpOptions& opt) {
    const auto sc = make_scaling(inst);
    std::vector<int> slack_of_row;
    const auto prob = lower<Scalar>(inst, sc, slack_of_row);
    ipm::Settings settings{opt.max_iters, opt.gap_tol, opt.feas_tol, opt.infeas_tol, 0.98};
    const auto res = ipm::solve(prob, settings);

    SdpSolution sol;
    sol.iterations = res.iterations;
    sol.status = res.status == ipm::Status::Optimal    ? SdpStatus::Optimal
                 : res.status == ipm::Status::Infeasible ? SdpStatus::Infeasible
                                                         : SdpStatus::MaxIter;
    const std::size_t nb = inst.block_dims.size();
    for (std::size_t l = 0; l < nb; ++l) {
        CMatrix x;
        if constexpr (std::is_same_v<Scalar, double>) {
            x = unembed(res.x[l]) * sc.b;
        } else {
            x = (res.x[l] + res.x[l].adjoint()) * (0.5 * sc.b);
        }
        sol.primal_blocks.emplace_back(x);
    }
    for (std::size_t m = 0; m < inst.constraints.size(); ++m) {
        const double y = res.y[static_cast<Eigen::Index>(m)] * sc.c * sc.b / sc.row[m];
        sol.duals.push_back(to_multiplier(inst.constraints[m].sense, y));
        if (sol.status == SdpStatus::Infeasible)
            sol.infeasibility_ray.push_back(
                to_multiplier(inst.constraints[m].sense, res.ray[static_cast<Eigen::Index>(m)] / sc.row[m]));
    }
    sol.primal_objective = inst.objective_value(sol.primal_blocks);
    double d = 0;
    for (std::size_t m = 0; m < inst.constraints.size(); ++m)
        d += from_multiplier(inst.constraints[m].sense, sol.duals[m]) * inst.constraints[m].rhs;
    sol.dual_objective = d;
    return sol;
}

HermitianMatrix zero_block(int n) { return HermitianMatrix::zero(n); }

SdpInstance build_common(const HermitianMatrix& phi0, const ChannelSet& channels,
                         const std::vector<double>& gammas, double p0, bool with_probe) {
    const int n = phi0.dim();
    const std::size_t k_users = channels.size();
    if (channels.n_tx() != n) throw DimensionMismatch("channel length differs from Phi0 size");
    if (gammas.size() != k_users) throw DimensionMismatch("one SINR target per user required");
    if (!(p0 > 0)) throw InvalidArgument("power budget must be positive");
    for (std::size_t k = 0; k < k_users; ++k) {
        if (!(gammas[k] > 0) || !std::isfinite(gammas[k])) throw InvalidArgument("SINR targets must be positive");
        if (channels[k].norm() == 0.0) throw Infeasible("zero channel cannot meet a positive SINR target");
    }

    SdpInstance inst;
    inst.power_budget = p0;
    const std::size_t nb = k_users + (with_probe ? 1 : 0);
    inst.block_dims.assign(nb, n);
    inst.roles.assign(k_users, BlockRole::CommBeam);
    if (with_probe) inst.roles.push_back(BlockRole::Probe);
    inst.objective_blocks.assign(nb, phi0);

    for (std::size_t k = 0; k < k_users; ++k) {
        const auto hk = HermitianMatrix::outer(channels[k]);
        SdpConstraint row;
        row.sense = Sense::GreaterEqual;
        row.rhs = 1.0;
        for (std::size_t j = 0; j < k_users; ++j) row.blocks.push_back(j == k ? hk * (1.0 / gammas[k]) : hk * -1.0);
        if (with_probe) row.blocks.push_back(zero_block(n));
        inst.constraints.push_back(std::move(row));
    }
    SdpConstraint power;
    power.sense = Sense::LessEqual;
    power.rhs = p0;
    power.blocks.assign(nb, HermitianMatrix::identity(n));
    inst.constraints.push_back(std::move(power));
    return inst;
}

}  // namespace

void SdpInstance::validate() const {
    const std::size_t nb = block_dims.size();
    if (nb == 0) throw InvalidArgument("SDP needs at least one block");
    if (objective_blocks.size() != nb || roles.size() != nb)
        throw DimensionMismatch("objective/roles do not match the block count");
    for (std::size_t l = 0; l < nb; ++l) {
        if (block_dims[l] < 1) throw InvalidArgument("block dimension must be positive");
        if (objective_blocks[l].dim() != block_dims[l]) throw DimensionMismatch("objective block size");
    }
    for (const auto& row : constraints) {
        if (row.blocks.size() != nb) throw DimensionMismatch("constraint row block count");
        for (std::size_t l = 0; l < nb; ++l)
            if (row.blocks[l].dim() != block_dims[l]) throw DimensionMismatch("constraint block size");
        if (!std::isfinite(row.rhs)) throw InvalidArgument("constraint rhs must be finite");
    }
}

double SdpInstance::objective_value(const std::vector<HermitianMatrix>& x) const {
    if (x.size() != block_dims.size()) throw DimensionMismatch("block count");
    double v = 0;
    for (std::size_t l = 0; l < x.size(); ++l) v += trace_inner(objective_blocks[l], x[l]);
    return v;
}

std::vector<double> SdpInstance::constraint_values(const std::vector<HermitianMatrix>& x) const {
    if (x.size() != block_dims.size()) throw DimensionMismatch("block count");
    std::vector<double> out;
    for (const auto& row : constraints) {
        double v = 0;
        for (std::size_t l = 0; l < x.size(); ++l) v += trace_inner(row.blocks[l], x[l]);
        out.push_back(v);
    }
    return out;
}

SdpSolution solve_sdp(const SdpInstance& instance, const SdpOptions& options) {
    instance.validate();
    if (options.field == SdpOptions::Field::ComplexNative) return solve_in<cplx>(instance, options);
    return solve_in<double>(instance, options);
}

SdpCertificate check_certificate(const SdpInstance& inst, const SdpSolution& sol) {
    SdpCertificate cert;
    const double p = sol.primal_objective;
    cert.relative_gap = std::abs(sol.primal_objective - sol.dual_objective) / (1.0 + std::abs(p));

    const auto vals = inst.constraint_values(sol.primal_blocks);
    for (std::size_t m = 0; m < inst.constraints.size(); ++m) {
        const auto& row = inst.constraints[m];
        double viol = 0;
        if (row.sense == Sense::GreaterEqual) viol = std::max(0.0, row.rhs - vals[m]);
        else if (row.sense == Sense::LessEqual) viol = std::max(0.0, vals[m] - row.rhs);
        else viol = std::abs(vals[m] - row.rhs);
        cert.primal_residual = std::max(cert.primal_residual, viol / (1.0 + std::abs(row.rhs)));
        if (row.sense != Sense::Equal && sol.duals[m] < 0) cert.multipliers_signed = false;
    }

    double compl_sum = 0;
    cert.min_primal_eig = std::numeric_limits<double>::infinity();
    cert.max_dual_eig = -std::numeric_limits<double>::infinity();
    for (std::size_t l = 0; l < inst.block_dims.size(); ++l) {
        cert.min_primal_eig = std::min(cert.min_primal_eig, min_eigenvalue(sol.primal_blocks[l]));
        // D_l = C_l - sum_m y_m A_ml must be negative semidefinite
        CMatrix d = inst.objective_blocks[l].matrix();
        for (std::size_t m = 0; m < inst.constraints.size(); ++m) {
            const double y = from_multiplier(inst.constraints[m].sense, sol.duals[m]);
            d -= y * inst.constraints[m].blocks[l].matrix();
        }
        const HermitianMatrix dh((d + d.adjoint()) * 0.5);
        cert.max_dual_eig = std::max(cert.max_dual_eig, dominant_eigpair(dh).value);
        cert.dual_scale = std::max(cert.dual_scale, dominant_eigpair(inst.objective_blocks[l]).value);
        compl_sum += -trace_inner(dh, sol.primal_blocks[l]);
    }
    // slack rows: multiplier times slack
    for (std::size_t m = 0; m < inst.constraints.size(); ++m)
        if (inst.constraints[m].sense != Sense::Equal)
            compl_sum += sol.duals[m] * std::abs(vals[m] - inst.constraints[m].rhs);
    cert.complementarity = std::abs(compl_sum) / (1.0 + std::abs(p));
    return cert;
}

SdpInstance build_p33(const HermitianMatrix& phi0, const ChannelSet& channels, const std::vector<double>& gammas,
                      double p0) {
    return build_common(phi0, channels, gammas, p0, false);
}

SdpInstance build_p43(const HermitianMatrix& phi0, const ChannelSet& channels, const std::vector<double>& gammas,
                      double p0) {
    return build_common(phi0, channels, gammas, p0, true);
}

std::string to_string(SdpStatus s) {
    switch (s) {
        case SdpStatus::Optimal: return "optimal";
        case SdpStatus::Infeasible: return "infeasible";
        case SdpStatus::MaxIter: return "max_iter";
    }
    return "unknown";
}

void write_listing(const SdpInstance& inst, std::ostream& os) {
    auto role = [](BlockRole r) {
        switch (r) {
            case BlockRole::CommBeam: return "comm";
            case BlockRole::Probe: return "probe";
            case BlockRole::Other: break;
        }
        return "other";
    };
    auto dump = [&](const HermitianMatrix& m) {
        for (int r = 0; r < m.dim(); ++r) {
            os << " ";
            for (int c = 0; c < m.dim(); ++c) os << ' ' << m(r, c).real() << (m(r, c).imag() < 0 ? "" : "+") << m(r, c).imag() << 'j';
            os << '\n';
        }
    };
    const auto old_prec = os.precision(17);
    os << "sdp maximize blocks " << inst.block_dims.size() << " rows " << inst.constraints.size() << '\n';
    for (std::size_t l = 0; l < inst.block_dims.size(); ++l)
        os << "block " << l << " dim " << inst.block_dims[l] << " role " << role(inst.roles[l]) << '\n';
    os << "objective\n";
    for (std::size_t l = 0; l < inst.block_dims.size(); ++l) {
        os << " block " << l << '\n';
        dump(inst.objective_blocks[l]);
    }
    for (std::size_t m = 0; m < inst.constraints.size(); ++m) {
        const auto& row = inst.constraints[m];
        const char* sense = row.sense == Sense::GreaterEqual ? ">=" : row.sense == Sense::LessEqual ? "<=" : "=";
        os << "row " << m << ' ' << sense << ' ' << row.rhs << '\n';
        for (std::size_t l = 0; l < row.blocks.size(); ++l) {
            if (is_zero(row.blocks[l])) continue;
            os << " block " << l << '\n';
            dump(row.blocks[l]);
        }
    }
    os << "end\n";
    os.precision(old_prec);
}

}  // namespace dfrc
