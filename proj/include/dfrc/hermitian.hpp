// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "dfrc/types.hpp"

namespace dfrc {

/// Dense complex matrix with conjugate symmetry enforced at construction.
class HermitianMatrix {
public:
    HermitianMatrix() = default;

    /// Throws InvalidArgument if `m` is not square or deviates from its
    /// adjoint by more than 1e-12 * max|m| entrywise. The stored matrix is
    /// the exact Hermitian part (m + m^H) / 2.
    explicit HermitianMatrix(const CMatrix& m);

    static HermitianMatrix identity(int n);
    static HermitianMatrix zero(int n);
    /// x x^H
    static HermitianMatrix outer(const CVector& x);

    int dim() const { return static_cast<int>(m_.rows()); }
    const CMatrix& matrix() const { return m_; }
    cplx operator()(int r, int c) const { return m_(r, c); }

    double trace() const { return m_.trace().real(); }

    HermitianMatrix operator+(const HermitianMatrix& o) const;
    HermitianMatrix& operator+=(const HermitianMatrix& o);
    HermitianMatrix operator*(double s) const;

private:
    struct Trusted {};
    HermitianMatrix(CMatrix m, Trusted) : m_(std::move(m)) {}

    CMatrix m_;
};

struct EigPair {
    double value;
    CVector vector;
};

struct HermitianSpectrum {
    RVector values;   // ascending
    CMatrix vectors;  // columns, unitary
};

/// Solves M x = b for Hermitian positive definite M via Cholesky.
/// Throws NotPositiveDefinite if a pivot is not strictly positive.
CVector solve_hpd(const HermitianMatrix& m, const CVector& b);

/// Largest eigenvalue and a unit eigenvector whose largest-magnitude entry
/// is real and non-negative.
EigPair dominant_eigpair(const HermitianMatrix& m);

HermitianSpectrum eig_hermitian(const HermitianMatrix& m);

/// Rotates `v` by a unit phase so that its largest-magnitude entry is real
/// non-negative. Ties resolve to the lowest index.
CVector canonical_phase(const CVector& v);

/// Smallest eigenvalue, used throughout for PSD checks.
double min_eigenvalue(const HermitianMatrix& m);

}  // namespace dfrc
