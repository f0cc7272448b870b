// SPDX-License-Identifier: Apache-2.0
// Block-dense primal-dual interior point used behind solve_sdp. Templated on
// the field so the complex-native path can cross-check the real embedding.
#pragma once

#include "dfrc/errors.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <vector>

namespace dfrc::ipm {

template <class Scalar>
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

enum class Status { Optimal, Infeasible, MaxIter };

// maximize <C, X>  s.t.  A(X) = b, X >= 0
// minimize b^T y   s.t.  Z = A^T(y) - C >= 0
template <class Scalar>
struct Problem {
    std::vector<int> dims;
    std::vector<Mat<Scalar>> c;
    std::vector<std::vector<Mat<Scalar>>> a;  // a[m][l]; size 0 means a zero block
    Eigen::VectorXd b;
};

template <class Scalar>
struct Result {
    std::vector<Mat<Scalar>> x, z;
    Eigen::VectorXd y;
    Eigen::VectorXd ray;
    Status status = Status::MaxIter;
    int iterations = 0;
};

struct Settings {
    int max_iters = 100;
    double gap_tol = 1e-8;
    double feas_tol = 1e-9;
    double infeas_tol = 1e-8;
    double step_fraction = 0.98;
};

template <class Scalar>
double inner(const Mat<Scalar>& a, const Mat<Scalar>& b) {
    return std::real(a.conjugate().cwiseProduct(b).sum());
}

template <class Scalar>
Mat<Scalar> sym(const Mat<Scalar>& m) {
    return (m + m.adjoint()) * 0.5;
}

template <class Scalar>
class Solver {
public:
    Solver(const Problem<Scalar>& p, Settings s) : p_(p), s_(s), nblocks_(p.dims.size()), nrows_(p.b.size()) {}

    Result<Scalar> run() {
        init();
        Result<Scalar> out;
        double n_total = 0;
        for (int d : p_.dims) n_total += d;
        const double b_norm = p_.b.norm();
        double c_norm = 0;
        for (const auto& c : p_.c) c_norm += c.squaredNorm();
        c_norm = std::sqrt(c_norm);

        for (int it = 0; it < s_.max_iters; ++it) {
            out.iterations = it;
            const Eigen::VectorXd rp = p_.b - apply_a(x_);
            std::vector<Mat<Scalar>> rd = apply_at(y_);
            for (std::size_t l = 0; l < nblocks_; ++l) rd[l] -= p_.c[l] + z_[l];
            const double pobj = objective(x_);
            const double dobj = p_.b.dot(y_);
            const double pinf = rp.norm() / (1.0 + b_norm);
            const double dinf = block_norm(rd) / (1.0 + c_norm);
            const double gap = std::abs(pobj - dobj) / (1.0 + std::abs(pobj) + std::abs(dobj));

            if (gap <= s_.gap_tol && pinf <= s_.feas_tol && dinf <= s_.feas_tol) {
                out.status = Status::Optimal;
                break;
            }
            // Farkas ray: A^T(y) >= 0 with b^T y < 0 certifies primal infeasibility.
            if (dobj < 0) {
                std::vector<Mat<Scalar>> aty = apply_at(y_);
                double defect = 0;
                for (std::size_t l = 0; l < nblocks_; ++l) {
                    Eigen::SelfAdjointEigenSolver<Mat<Scalar>> es(sym<Scalar>(aty[l]), Eigen::EigenvaluesOnly);
                    defect = std::max(defect, -es.eigenvalues()[0]);
                }
                if (defect <= s_.infeas_tol * -dobj && -dobj > 1.0 / s_.infeas_tol) {
                    out.status = Status::Infeasible;
                    out.ray = y_ / -dobj;
                    break;
                }
            }

            double mu = 0;
            for (std::size_t l = 0; l < nblocks_; ++l) mu += inner<Scalar>(x_[l], z_[l]);
            mu /= n_total;

            factor_z();
            const Eigen::MatrixXd schur = schur_matrix();
            Eigen::LLT<Eigen::MatrixXd> llt(schur);
            if (llt.info() != Eigen::Success) throw NumericalBreakdown("Schur complement is not positive definite");

            // predictor
            std::vector<Mat<Scalar>> dx, dz;
            Eigen::VectorXd dy;
            direction(llt, rd, 0.0, mu, nullptr, nullptr, dx, dy, dz);
            const double ap = std::min(1.0, step_length(x_, dx));
            const double ad = std::min(1.0, step_length(z_, dz));
            double mu_aff = 0;
            for (std::size_t l = 0; l < nblocks_; ++l)
                mu_aff += inner<Scalar>(Mat<Scalar>(x_[l] + ap * dx[l]), Mat<Scalar>(z_[l] + ad * dz[l]));
            mu_aff /= n_total;
            const double sigma = std::clamp(std::pow(std::max(mu_aff, 0.0) / mu, 3.0), 0.0, 1.0);

            // corrector
            std::vector<Mat<Scalar>> dx2, dz2;
            Eigen::VectorXd dy2;
            direction(llt, rd, sigma, mu, &dx, &dz, dx2, dy2, dz2);
            const double ap2 = std::min(1.0, s_.step_fraction * step_length(x_, dx2));
            const double ad2 = std::min(1.0, s_.step_fraction * step_length(z_, dz2));
            for (std::size_t l = 0; l < nblocks_; ++l) {
                x_[l] = sym<Scalar>(Mat<Scalar>(x_[l] + ap2 * dx2[l]));
                z_[l] = sym<Scalar>(Mat<Scalar>(z_[l] + ad2 * dz2[l]));
            }
            y_ += ad2 * dy2;
            if (!y_.allFinite()) throw NumericalBreakdown("interior point iterate diverged");
            out.iterations = it + 1;
        }
        out.x = x_;
        out.z = z_;
        out.y = y_;
        return out;
    }

private:
    void init() {
        x_.assign(nblocks_, {});
        z_.assign(nblocks_, {});
        y_ = Eigen::VectorXd::Zero(nrows_);
        for (std::size_t l = 0; l < nblocks_; ++l) {
            const int n = p_.dims[l];
            double xi = std::max(10.0, std::sqrt(double(n)));
            double eta = std::max({10.0, std::sqrt(double(n)), p_.c[l].norm()});
            for (std::size_t m = 0; m < nrows_; ++m) {
                if (p_.a[m][l].size() == 0) continue;
                const double an = p_.a[m][l].norm();
                xi = std::max(xi, n * (1.0 + std::abs(p_.b[m])) / (1.0 + an));
                eta = std::max(eta, an);
            }
            x_[l] = Mat<Scalar>::Identity(n, n) * xi;
            z_[l] = Mat<Scalar>::Identity(n, n) * eta;
        }
    }

    Eigen::VectorXd apply_a(const std::vector<Mat<Scalar>>& x) const {
        Eigen::VectorXd r = Eigen::VectorXd::Zero(nrows_);
        for (std::size_t m = 0; m < nrows_; ++m)
            for (std::size_t l = 0; l < nblocks_; ++l)
                if (p_.a[m][l].size()) r[m] += inner<Scalar>(p_.a[m][l], x[l]);
        return r;
    }

    std::vector<Mat<Scalar>> apply_at(const Eigen::VectorXd& y) const {
        std::vector<Mat<Scalar>> out(nblocks_);
        for (std::size_t l = 0; l < nblocks_; ++l) {
            out[l] = Mat<Scalar>::Zero(p_.dims[l], p_.dims[l]);
            for (std::size_t m = 0; m < nrows_; ++m)
                if (p_.a[m][l].size()) out[l] += y[m] * p_.a[m][l];
        }
        return out;
    }

    double objective(const std::vector<Mat<Scalar>>& x) const {
        double v = 0;
        for (std::size_t l = 0; l < nblocks_; ++l) v += inner<Scalar>(p_.c[l], x[l]);
        return v;
    }

    static double block_norm(const std::vector<Mat<Scalar>>& v) {
        double s = 0;
        for (const auto& m : v) s += m.squaredNorm();
        return std::sqrt(s);
    }

    void factor_z() {
        zinv_.assign(nblocks_, {});
        for (std::size_t l = 0; l < nblocks_; ++l) {
            Eigen::LLT<Mat<Scalar>> llt(z_[l]);
            if (llt.info() != Eigen::Success) throw NumericalBreakdown("dual slack lost definiteness");
            zinv_[l] = sym<Scalar>(Mat<Scalar>(llt.solve(Mat<Scalar>::Identity(p_.dims[l], p_.dims[l]))));
        }
    }

    // M_ij = sum_l Re tr(A_il X_l A_jl Z_l^{-1})
    Eigen::MatrixXd schur_matrix() const {
        Eigen::MatrixXd m = Eigen::MatrixXd::Zero(nrows_, nrows_);
        for (std::size_t l = 0; l < nblocks_; ++l) {
            for (std::size_t j = 0; j < nrows_; ++j) {
                if (p_.a[j][l].size() == 0) continue;
                const Mat<Scalar> t = x_[l] * p_.a[j][l] * zinv_[l];
                for (std::size_t i = 0; i < nrows_; ++i)
                    if (p_.a[i][l].size()) m(i, j) += inner<Scalar>(p_.a[i][l], t);
            }
        }
        return (m + m.transpose()) * 0.5;
    }

    void direction(const Eigen::LLT<Eigen::MatrixXd>& llt, const std::vector<Mat<Scalar>>& rd, double sigma,
                   double mu, const std::vector<Mat<Scalar>>* dx_aff, const std::vector<Mat<Scalar>>* dz_aff,
                   std::vector<Mat<Scalar>>& dx, Eigen::VectorXd& dy, std::vector<Mat<Scalar>>& dz) const {
        // M dy = sigma mu A(Z^-1) - b - A(X Rd Z^-1) - A(dXa dZa Z^-1)
        std::vector<Mat<Scalar>> g(nblocks_);
        for (std::size_t l = 0; l < nblocks_; ++l) {
            g[l] = sigma * mu * zinv_[l] - x_[l] * rd[l] * zinv_[l];
            if (dx_aff) g[l] -= (*dx_aff)[l] * (*dz_aff)[l] * zinv_[l];
        }
        const Eigen::VectorXd rhs = apply_a(g) - p_.b;
        dy = llt.solve(rhs);
        dz = apply_at(dy);
        dx.assign(nblocks_, {});
        for (std::size_t l = 0; l < nblocks_; ++l) {
            dz[l] += rd[l];
            Mat<Scalar> d = sigma * mu * zinv_[l] - x_[l] - x_[l] * dz[l] * zinv_[l];
            if (dx_aff) d -= (*dx_aff)[l] * (*dz_aff)[l] * zinv_[l];
            dx[l] = sym<Scalar>(d);
        }
    }

    // Largest alpha with X + alpha dX >= 0 over all blocks.
    double step_length(const std::vector<Mat<Scalar>>& x, const std::vector<Mat<Scalar>>& dx) const {
        double alpha = std::numeric_limits<double>::infinity();
        for (std::size_t l = 0; l < nblocks_; ++l) {
            Eigen::LLT<Mat<Scalar>> llt(x[l]);
            if (llt.info() != Eigen::Success) throw NumericalBreakdown("iterate lost definiteness");
            const Mat<Scalar> linv = llt.matrixL().solve(Mat<Scalar>::Identity(p_.dims[l], p_.dims[l]));
            const Mat<Scalar> s = sym<Scalar>(Mat<Scalar>(linv * dx[l] * linv.adjoint()));
            Eigen::SelfAdjointEigenSolver<Mat<Scalar>> es(s, Eigen::EigenvaluesOnly);
            const double lmin = es.eigenvalues()[0];
            if (lmin < 0) alpha = std::min(alpha, -1.0 / lmin);
        }
        return alpha;
    }

    const Problem<Scalar>& p_;
    Settings s_;
    std::size_t nblocks_, nrows_;
    std::vector<Mat<Scalar>> x_, z_, zinv_;
    Eigen::VectorXd y_;
};

template <class Scalar>
Result<Scalar> solve(const Problem<Scalar>& p, Settings s) {
    return Solver<Scalar>(p, s).run();
}

}  // namespace dfrc::ipm
