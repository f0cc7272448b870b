// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "dfrc/types.hpp"

#include <cstddef>
#include <vector>

namespace dfrc {

/// Transmit and receive uniform linear arrays. Spacings are in wavelengths.
struct ArrayGeometry {
    int n_tx = 1;
    int n_rx = 1;
    double spacing_tx = 0.5;
    double spacing_rx = 0.5;

    ArrayGeometry() = default;
    ArrayGeometry(int n_tx, int n_rx, double spacing_tx = 0.5, double spacing_rx = 0.5);

    /// Both arrays with the same element count and half-wavelength spacing.
    static ArrayGeometry uniform(int n) { return {n, n, 0.5, 0.5}; }

    bool operator==(const ArrayGeometry&) const = default;
};

struct Interferer {
    double angle = 0.0;  // radians
    double power = 0.0;  // linear |alpha_i|^2
    bool operator==(const Interferer&) const = default;
};

/// Radar environment: one target plus signal-dependent interferers.
/// Only the powers are stored; the complex phases never enter the
/// second-order statistics.
class Scene {
public:
    Scene(double target_angle, double target_power, std::vector<Interferer> interferers = {});

    double target_angle() const { return target_angle_; }
    double target_power() const { return target_power_; }
    const std::vector<Interferer>& interferers() const { return interferers_; }

    bool operator==(const Scene&) const = default;

private:
    double target_angle_;
    double target_power_;
    std::vector<Interferer> interferers_;
};

/// Downlink channels h_k, all of length N_t.
class ChannelSet {
public:
    explicit ChannelSet(std::vector<CVector> channels);

    std::size_t size() const { return channels_.size(); }
    int n_tx() const { return static_cast<int>(channels_.front().size()); }
    const CVector& operator[](std::size_t k) const { return channels_[k]; }
    const std::vector<CVector>& channels() const { return channels_; }

    /// First `k` channels, used when sweeping the number of users.
    ChannelSet first(std::size_t k) const;

private:
    std::vector<CVector> channels_;
};

// Entry n is exp(-j 2 pi n spacing sin(angle)).
CVector steering_tx(const ArrayGeometry& geom, double angle);
CVector steering_rx(const ArrayGeometry& geom, double angle);

/// A(angle) = a_r(angle) a_t(angle)^T (plain transpose, no conjugate).
CMatrix channel_matrix(const ArrayGeometry& geom, double angle);

}  // namespace dfrc
