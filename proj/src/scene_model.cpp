// SPDX-License-Identifier: Apache-2.0
#include "dfrc/scene_model.hpp"

#include "dfrc/errors.hpp"

#include <string>

namespace dfrc {

namespace {

CVector ula_response(int n, double spacing, double angle) {
    CVector a(n);
    const double step = -2.0 * kPi * spacing * std::sin(angle);
    for (int i = 0; i < n; ++i) a[i] = std::polar(1.0, step * i);
    return a;
}

bool in_half_plane(double angle) { return std::isfinite(angle) && std::abs(angle) < kPi / 2.0; }

}  // namespace

ArrayGeometry::ArrayGeometry(int n_tx_, int n_rx_, double spacing_tx_, double spacing_rx_)
    : n_tx(n_tx_), n_rx(n_rx_), spacing_tx(spacing_tx_), spacing_rx(spacing_rx_) {
    if (n_tx < 1 || n_rx < 1) throw InvalidArgument("array sizes must be at least 1");
    if (!std::isfinite(spacing_tx) || !std::isfinite(spacing_rx) || spacing_tx < 0 || spacing_rx < 0)
        throw InvalidArgument("antenna spacing must be finite and non-negative");
}

Scene::Scene(double target_angle, double target_power, std::vector<Interferer> interferers)
    : target_angle_(target_angle), target_power_(target_power), interferers_(std::move(interferers)) {
    auto check = [](double angle, double power, const char* what) {
        if (!in_half_plane(angle))
            throw InvalidArgument(std::string(what) + " angle must lie in (-pi/2, pi/2)");
        if (!std::isfinite(power) || power < 0)
            throw InvalidArgument(std::string(what) + " power must be finite and non-negative");
    };
    check(target_angle_, target_power_, "target");
    for (const auto& i : interferers_) check(i.angle, i.power, "interferer");
}

ChannelSet::ChannelSet(std::vector<CVector> channels) : channels_(std::move(channels)) {
    if (channels_.empty()) throw InvalidArgument("channel set needs at least one user");
    const auto n = channels_.front().size();
    if (n == 0) throw InvalidArgument("channel vectors must be non-empty");
    for (const auto& h : channels_) {
        if (h.size() != n) throw DimensionMismatch("channel vectors differ in length");
        if (!h.allFinite()) throw InvalidArgument("channel entries must be finite");
    }
}

ChannelSet ChannelSet::first(std::size_t k) const {
    if (k == 0 || k > channels_.size()) throw InvalidArgument("requested user count out of range");
    return ChannelSet({channels_.begin(), channels_.begin() + static_cast<std::ptrdiff_t>(k)});
}

CVector steering_tx(const ArrayGeometry& geom, double angle) {
    return ula_response(geom.n_tx, geom.spacing_tx, angle);
}

CVector steering_rx(const ArrayGeometry& geom, double angle) {
    return ula_response(geom.n_rx, geom.spacing_rx, angle);
}

CMatrix channel_matrix(const ArrayGeometry& geom, double angle) {
    return steering_rx(geom, angle) * steering_tx(geom, angle).transpose();
}

}  // namespace dfrc
