#include "doctest.h"

#include "dfrc/errors.hpp"
#include "dfrc/hermitian.hpp"
#include "dfrc/scene_model.hpp"

#include "../support/fixtures.hpp"

using namespace dfrc;
using namespace dfrc::testing;

namespace {

CMatrix random_matrix(std::mt19937_64& rng, int n) {
    CMatrix m(n, n);
    for (int c = 0; c < n; ++c) m.col(c) = random_cn(rng, n);
    return m;
}

HermitianMatrix random_hpd(std::mt19937_64& rng, int n) {
    const CMatrix b = random_matrix(rng, n);
    return HermitianMatrix(b * b.adjoint() + 0.1 * CMatrix::Identity(n, n));
}

}  // namespace

TEST_CASE("construction enforces conjugate symmetry") {
    CMatrix m(2, 2);
    m << 1.0, cplx(0, 1), cplx(0, -1), 2.0;
    CHECK_NOTHROW(HermitianMatrix{m});
    m(0, 1) = cplx(0.1, 1.0);
    CHECK_THROWS_AS(HermitianMatrix{m}, InvalidArgument);
    CHECK_THROWS_AS(HermitianMatrix{CMatrix::Zero(2, 3)}, InvalidArgument);
    // sub-tolerance asymmetry is removed
    m(0, 1) = cplx(1e-14, 1.0);
    const HermitianMatrix h(m);
    CHECK(h.matrix() == h.matrix().adjoint());
}

TEST_CASE("solve_hpd") {
    const CVector b = CVector::LinSpaced(4, 1.0, 4.0);
    CHECK((solve_hpd(HermitianMatrix::identity(4), b) - b).norm() == 0.0);
    CHECK((solve_hpd(HermitianMatrix::identity(4) * 2.0, b) - b / 2.0).norm() <= 1e-15);
    CHECK_THROWS_AS(solve_hpd(HermitianMatrix::zero(3), CVector::Ones(3)), NotPositiveDefinite);
    CHECK_THROWS_AS(solve_hpd(HermitianMatrix::identity(3), CVector::Ones(2)), DimensionMismatch);

    std::mt19937_64 rng(1);
    std::uniform_int_distribution<int> dim(1, 32);
    for (int t = 0; t < 1000; ++t) {
        const int n = dim(rng);
        const auto m = random_hpd(rng, n);
        const CVector rhs = random_cn(rng, n);
        const CVector x = solve_hpd(m, rhs);
        const double cond = eig_hermitian(m).values[n - 1] / eig_hermitian(m).values[0];
        CHECK((m.matrix() * x - rhs).norm() <= 1e-14 * cond * rhs.norm());
    }
}

TEST_CASE("dominant eigenpair") {
    CMatrix d = CMatrix::Zero(3, 3);
    d.diagonal() << 3.0, 1.0, 2.0;
    const auto top = dominant_eigpair(HermitianMatrix(d));
    CHECK(top.value == doctest::Approx(3.0));
    CHECK((top.vector - CVector::Unit(3, 0)).norm() <= 1e-12);

    const auto id = dominant_eigpair(HermitianMatrix::identity(4));
    CHECK(id.value == doctest::Approx(1.0));
    CHECK(id.vector.norm() == doctest::Approx(1.0));
    CHECK((dominant_eigpair(HermitianMatrix::identity(4)).vector - id.vector).norm() == 0.0);

    // |alpha|^2 A^H A without interference: value |alpha|^2 N_t N_r, vector conj(a_t)/sqrt(N_t)
    const auto geom = ArrayGeometry(6, 4);
    const double th = deg_to_rad(20.0);
    const CMatrix a = channel_matrix(geom, th);
    const auto e = dominant_eigpair(HermitianMatrix(10.0 * a.adjoint() * a));
    CHECK(e.value == doctest::Approx(10.0 * 24.0));
    const CVector at_hat = steering_tx(geom, th).conjugate() / std::sqrt(6.0);
    CHECK(std::abs(std::abs(at_hat.dot(e.vector)) - 1.0) <= 1e-12);
    // canonical phase: first entry of at_hat has the largest modulus (tie), so it is real
    CHECK(std::abs(e.vector[0].imag()) <= 1e-12);
    CHECK(e.vector[0].real() > 0);

    std::mt19937_64 rng(2);
    const CMatrix b = random_matrix(rng, 7);
    const HermitianMatrix m((b + b.adjoint()) * 0.5);
    const auto mp = dominant_eigpair(m);
    const double scale = m.matrix().norm();
    CHECK((m.matrix() * mp.vector - mp.value * mp.vector).norm() <= 1e-9 * scale);
    for (int t = 0; t < 1000; ++t) {
        CVector q = random_cn(rng, 7);
        q.normalize();
        CHECK(mp.value >= q.dot(m.matrix() * q).real() - 1e-12 * scale);
    }
}

TEST_CASE("full spectrum") {
    CMatrix d = CMatrix::Zero(2, 2);
    d.diagonal() << 1.0, 2.0;
    const auto s = eig_hermitian(HermitianMatrix(d));
    CHECK(s.values[0] == doctest::Approx(1.0));
    CHECK(s.values[1] == doctest::Approx(2.0));
    CHECK((s.vectors.cwiseAbs() - RMatrix::Identity(2, 2)).norm() <= 1e-12);

    std::mt19937_64 rng(3);
    const CVector u = random_cn(rng, 5);
    const auto r1 = eig_hermitian(HermitianMatrix::outer(u)).values;
    for (int i = 0; i < 4; ++i) CHECK(std::abs(r1[i]) <= 1e-12 * u.squaredNorm());
    CHECK(r1[4] == doctest::Approx(u.squaredNorm()));

    const CMatrix b = random_matrix(rng, 9);
    const HermitianMatrix m((b + b.adjoint()) * 0.5);
    const auto sp = eig_hermitian(m);
    const CMatrix back = sp.vectors * sp.values.cast<cplx>().asDiagonal() * sp.vectors.adjoint();
    CHECK((back - m.matrix()).norm() <= 1e-9 * m.matrix().norm());
    CHECK((sp.vectors.adjoint() * sp.vectors - CMatrix::Identity(9, 9)).norm() <= 1e-12);
    CHECK(min_eigenvalue(m) == doctest::Approx(sp.values[0]));
}

TEST_CASE("arithmetic") {
    const auto a = HermitianMatrix::identity(3);
    auto b = a * 2.0 + a;
    CHECK(b.trace() == doctest::Approx(9.0));
    b += HermitianMatrix::zero(3);
    CHECK(b(1, 1) == cplx(3.0, 0.0));
    CHECK_THROWS_AS(a + HermitianMatrix::identity(2), DimensionMismatch);
}
