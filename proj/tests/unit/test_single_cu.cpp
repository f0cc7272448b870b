#include "doctest.h"

#include "dfrc/errors.hpp"
#include "dfrc/single_cu.hpp"

#include "../support/fixtures.hpp"

using namespace dfrc;
using namespace dfrc::testing;

namespace {

double quad(const HermitianMatrix& phi, const CVector& u) { return u.dot(phi.matrix() * u).real(); }

}  // namespace

TEST_CASE("closed form without an active constraint") {
    const auto geom = ArrayGeometry::uniform(6);
    const auto phi = gain_at_uniform(paper_scene(), geom, 100.0);
    const auto g = dominant_eigpair(phi).vector;
    std::mt19937_64 rng(1);
    const CVector h = random_cn(rng, 6);

    CHECK((closed_form_beam(phi, h, 0.0, 100.0) - 10.0 * g).norm() <= 1e-12);
    CHECK(closed_form_regime(phi, h, 0.0, 100.0) == ClosedFormRegime::ConstraintInactive);
    // h parallel to g: always inactive
    const CVector hg = g * cplx(0.3, -1.2);
    CHECK(closed_form_regime(phi, hg, 100.0 * hg.squaredNorm(), 100.0) == ClosedFormRegime::ConstraintInactive);
    CHECK((closed_form_beam(phi, hg, 100.0 * hg.squaredNorm(), 100.0) - 10.0 * g).norm() <= 1e-12);
}

TEST_CASE("closed form with an active constraint") {
    std::mt19937_64 rng(2);
    const auto geom = ArrayGeometry::uniform(6);
    const auto phi = gain_at_uniform(paper_scene(), geom, 100.0);
    const auto g = dominant_eigpair(phi).vector;
    for (int t = 0; t < 5; ++t) {
        const CVector h = random_cn(rng, 6);
        const double lo = 100.0 * std::norm(h.dot(g)), hi = 100.0 * h.squaredNorm();
        const double gamma = 0.5 * (lo + hi);
        REQUIRE(closed_form_regime(phi, h, gamma, 100.0) == ClosedFormRegime::ConstraintActive);
        const CVector u = closed_form_beam(phi, h, gamma, 100.0);
        CHECK(std::abs(std::norm(h.dot(u)) - gamma) <= 1e-8 * gamma);
        CHECK(std::abs(u.squaredNorm() - 100.0) <= 1e-10 * 100.0);
        const double best = quad(phi, u);
        for (int c = 0; c < 10000; ++c) CHECK(quad(phi, random_feasible_beam(rng, h, gamma, 100.0)) <= best * (1 + 1e-12));

        // both branches meet at the boundary
        const CVector a = closed_form_branch(phi, h, lo, 100.0, ClosedFormRegime::ConstraintInactive);
        const CVector b = closed_form_branch(phi, h, lo, 100.0, ClosedFormRegime::ConstraintActive);
        CHECK((a - b).norm() <= 1e-8 * a.norm());
    }
}

TEST_CASE("infeasible and invalid inputs") {
    const auto phi = gain_at_uniform(paper_scene(), ArrayGeometry::uniform(3), 10.0);
    const CVector h = CVector::Ones(3);
    CHECK_THROWS_AS(closed_form_beam(phi, h, 10.0 * 3.0 * 1.01, 10.0), Infeasible);
    CHECK_NOTHROW(closed_form_beam(phi, h, 10.0 * 3.0, 10.0));
    CHECK_THROWS_AS(closed_form_beam(phi, CVector::Zero(3), 1.0, 10.0), InvalidArgument);
    CHECK_THROWS_AS(closed_form_beam(phi, h, -1.0, 10.0), InvalidArgument);
    CHECK_THROWS_AS(closed_form_beam(phi, CVector::Ones(4), 1.0, 10.0), DimensionMismatch);

    SingleCuProblem p{paper_scene(), ArrayGeometry::uniform(3), h, 31.0, 10.0};
    CHECK_FALSE(p.feasible());
    CHECK_THROWS_AS(algorithm1(p), Infeasible);
    CHECK_THROWS_AS(dedicated_single_cu(p), Infeasible);
}

TEST_CASE("algorithm1 without interferers stops after one refinement") {
    std::mt19937_64 rng(3);
    const auto geom = ArrayGeometry::uniform(5);
    const CVector h = random_cn(rng, 5);
    for (double gamma : {0.0, 50.0 * h.squaredNorm()}) {
        const SingleCuProblem p{clear_scene(), geom, h, gamma, 100.0};
        const auto sol = algorithm1(p);
        // Phi does not depend on u, so the first closed-form step is final;
        // a second step is only needed to observe that nothing changed
        CHECK(sol.iterations <= 2);
        const auto phi = radar_gain_matrix(clear_scene(), TransmitCovariance::zero(5), geom);
        CHECK((sol.comm_beams[0] - closed_form_beam(phi, h, gamma, 100.0)).norm() <= 1e-9);
        const auto n = sol.trace.size();
        CHECK(sol.trace[n - 1] == doctest::Approx(sol.trace[n - 2]));
    }
}

TEST_CASE("algorithm1 on the tradeoff fixture") {
    const auto geom = ArrayGeometry::uniform(8);
    const CVector h = tradeoff_channel();
    for (double gdb : {10.0, 20.0, 25.0, 28.0}) {
        const SingleCuProblem p{paper_scene(), geom, h, from_db(gdb), 100.0};
        const auto sol = algorithm1(p);
        CHECK(sol.iterations <= 50);
        CHECK(sol.cu_sinrs[0] >= p.gamma * (1 - 1e-9));
        CHECK(sol.comm_beams[0].squaredNorm() <= 100.0 * (1 + 1e-12));
        CHECK(sol.probe_power_fraction == 0.0);
        CHECK(sol.trace.size() == static_cast<std::size_t>(sol.iterations + 1));
        const auto r = sol.covariance();
        CHECK(sol.radar_sinr == doctest::Approx(avg_radar_sinr(radar_gain_matrix(p.scene, r, geom), r)).epsilon(1e-6));
        const CVector w = sol.rx_beam;
        CHECK(std::abs(w.dot(channel_matrix(geom, 0.0) * sol.comm_beams[0]) - 1.0) <= 1e-9);
    }
    // independent reference values (numpy): radar benchmark and Gamma = P0 |h|^2
    const auto bench = algorithm1({paper_scene(), geom, h, 0.0, 100.0});
    CHECK(to_db(bench.radar_sinr) == doctest::Approx(47.9286408).epsilon(1e-7));
    CHECK(to_db(bench.cu_sinrs[0]) == doctest::Approx(17.0898359).epsilon(1e-7));
    const auto mrt = algorithm1({paper_scene(), geom, h, 100.0 * h.squaredNorm(), 100.0});
    CHECK(to_db(100.0 * h.squaredNorm()) == doctest::Approx(28.1026613).epsilon(1e-8));
    CHECK(to_db(mrt.radar_sinr) == doctest::Approx(36.8950920).epsilon(1e-7));
}

TEST_CASE("dedicated single user keeps the probe at zero") {
    const auto geom = ArrayGeometry::uniform(6);
    const auto ch = convergence_channels();
    const SingleCuProblem p{paper_scene(), geom, ch[0], from_db(20.0), 100.0};
    const auto a = algorithm1(p);
    const auto d = dedicated_single_cu(p);
    REQUIRE(d.probe_beam.has_value());
    CHECK(d.probe_beam->norm() == 0.0);
    CHECK(d.probe_power_fraction == 0.0);
    CHECK(d.radar_sinr == doctest::Approx(a.radar_sinr).epsilon(1e-9));
    CHECK(std::abs(to_db(d.radar_sinr) - to_db(a.radar_sinr)) <= 0.05);
}

TEST_CASE("iteration cap reports the best iterate") {
    SingleCuProblem p{paper_scene(), ArrayGeometry::uniform(8), tradeoff_channel(), from_db(25.0), 100.0};
    p.max_iters = 1;
    p.convergence_delta = 1e-300;
    try {
        algorithm1(p);
        FAIL("expected NoConvergence");
    } catch (const NoConvergence& e) {
        CHECK(e.best().iterations == 1);
        CHECK(e.best().comm_beams.size() == 1);
    }
}
