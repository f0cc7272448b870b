// Shared scenes, channels and random draws for the test binaries.
#pragma once

#include "dfrc/radar_core.hpp"
#include "dfrc/scene_model.hpp"

#include <random>
#include <vector>

namespace dfrc::testing {

inline Scene paper_scene() {
    std::vector<Interferer> interferers;
    for (double deg : {-60.0, -30.0, 30.0, 60.0}) interferers.push_back({deg_to_rad(deg), from_db(30.0)});
    return Scene(0.0, from_db(10.0), interferers);
}

inline Scene clear_scene(double power = 10.0) { return Scene(0.0, power); }

inline CVector make_vector(std::initializer_list<cplx> v) {
    CVector out(static_cast<Eigen::Index>(v.size()));
    Eigen::Index i = 0;
    for (auto z : v) out[i++] = z;
    return out;
}

using namespace std::complex_literals;

// Single-user reference channel (N_t = 8).
inline CVector tradeoff_channel() {
    return make_vector({0.21 - 0.02i, -0.56 + 0.65i, 0.57 - 0.23i, -0.93 + 0.47i, -0.19 + 1.35i, -0.19 + 0.11i,
                        1.05 - 0.21i, 1.02 - 0.35i});
}

// Three-user reference channels (N_t = 6).
inline ChannelSet convergence_channels() {
    return ChannelSet({
        make_vector({-0.33 - 1.17i, -0.47 - 0.61i, 0.42 - 0.82i, 0.22 - 0.71i, 0.21 + 0.58i, -0.19 + 0.13i}),
        make_vector({-0.69 + 0.67i, -0.38 + 0.79i, -0.32 + 1.09i, 1.04 - 0.02i, -0.17 + 0.05i, -2.01 - 0.60i}),
        make_vector({0.80 - 0.48i, -0.68 - 0.23i, 0.10 - 0.17i, -0.01 - 0.19i, 0.06 + 0.62i, -0.34 - 0.03i}),
    });
}

inline CVector random_cn(std::mt19937_64& rng, int n) {
    std::normal_distribution<double> d(0.0, std::sqrt(0.5));
    CVector v(n);
    for (int i = 0; i < n; ++i) v[i] = cplx(d(rng), d(rng));
    return v;
}

inline ChannelSet random_channels(std::mt19937_64& rng, int k, int n) {
    std::vector<CVector> hs;
    for (int i = 0; i < k; ++i) hs.push_back(random_cn(rng, n));
    return ChannelSet(hs);
}

inline HermitianMatrix gain_at_uniform(const Scene& scene, const ArrayGeometry& geom, double p0) {
    const CVector u = CVector::Ones(geom.n_tx) * std::sqrt(p0 / geom.n_tx);
    return radar_gain_matrix(scene, TransmitCovariance::from_beams({u}), geom);
}

}  // namespace dfrc::testing

namespace dfrc::testing {

// Uniformly spread draw from {u : |h^H u|^2 >= gamma, |u|^2 <= p0}: the
// component along h has power in [gamma/|h|^2, p0] and a random phase, the
// orthogonal part gets a random direction and any remaining power.
inline CVector random_feasible_beam(std::mt19937_64& rng, const CVector& h, double gamma, double p0) {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const CVector h_hat = h / h.norm();
    const double lo = gamma / h.squaredNorm();
    const double along = lo + unif(rng) * (p0 - lo);
    CVector z = random_cn(rng, static_cast<int>(h.size()));
    z -= h_hat * h_hat.dot(z);
    z.normalize();
    const double perp = unif(rng) * (p0 - along);
    return std::sqrt(along) * std::polar(1.0, 2 * kPi * unif(rng)) * h_hat + std::sqrt(perp) * z;
}

}  // namespace dfrc::testing
