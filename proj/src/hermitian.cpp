// SPDX-License-Identifier: Apache-2.0
#include "dfrc/hermitian.hpp"

#include "dfrc/errors.hpp"

#include <Eigen/Eigenvalues>

namespace dfrc {

HermitianMatrix::HermitianMatrix(const CMatrix& m) {
    if (m.rows() != m.cols()) throw InvalidArgument("Hermitian matrix must be square");
    const double scale = m.size() ? m.cwiseAbs().maxCoeff() : 0.0;
    const double asym = m.size() ? (m - m.adjoint()).cwiseAbs().maxCoeff() : 0.0;
    if (!(asym <= 1e-12 * scale)) throw InvalidArgument("matrix is not Hermitian");
    m_ = (m + m.adjoint()) * 0.5;
}

HermitianMatrix HermitianMatrix::identity(int n) { return {CMatrix::Identity(n, n), Trusted{}}; }

HermitianMatrix HermitianMatrix::zero(int n) { return {CMatrix::Zero(n, n), Trusted{}}; }

HermitianMatrix HermitianMatrix::outer(const CVector& x) { return {x * x.adjoint(), Trusted{}}; }

HermitianMatrix HermitianMatrix::operator+(const HermitianMatrix& o) const {
    if (o.dim() != dim()) throw DimensionMismatch("Hermitian sum of different sizes");
    return {m_ + o.m_, Trusted{}};
}

HermitianMatrix& HermitianMatrix::operator+=(const HermitianMatrix& o) {
    if (o.dim() != dim()) throw DimensionMismatch("Hermitian sum of different sizes");
    m_ += o.m_;
    return *this;
}

HermitianMatrix HermitianMatrix::operator*(double s) const { return {m_ * s, Trusted{}}; }

CVector solve_hpd(const HermitianMatrix& m, const CVector& b) {
    if (b.size() != m.dim()) throw DimensionMismatch("solve_hpd: rhs length does not match matrix");
    Eigen::LLT<CMatrix> llt(m.matrix());
    if (llt.info() != Eigen::Success) throw NotPositiveDefinite("solve_hpd: non-positive pivot");
    return llt.solve(b);
}

CVector canonical_phase(const CVector& v) {
    if (v.size() == 0) return v;
    Eigen::Index idx = 0;
    double best = -1.0;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        // 1e-12 slack keeps the choice stable against rounding between equal-magnitude entries
        if (std::abs(v[i]) > best * (1.0 + 1e-12)) {
            best = std::abs(v[i]);
            idx = i;
        }
    }
    if (best == 0.0) return v;
    return v * (std::conj(v[idx]) / best);
}

HermitianSpectrum eig_hermitian(const HermitianMatrix& m) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(m.matrix());
    if (es.info() != Eigen::Success) throw NumericalBreakdown("Hermitian eigensolver failed");
    return {es.eigenvalues(), es.eigenvectors()};
}

EigPair dominant_eigpair(const HermitianMatrix& m) {
    auto s = eig_hermitian(m);
    const auto last = s.values.size() - 1;
    return {s.values[last], canonical_phase(s.vectors.col(last))};
}

double min_eigenvalue(const HermitianMatrix& m) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(m.matrix(), Eigen::EigenvaluesOnly);
    return es.eigenvalues()[0];
}

}  // namespace dfrc
