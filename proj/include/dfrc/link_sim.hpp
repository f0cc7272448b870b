// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "dfrc/radar_core.hpp"

#include <cstdint>
#include <vector>

namespace dfrc {

struct SimConfig {
    long n_symbols = 100000;
    std::uint64_t seed = 1;
    /// Draw a fresh uniform phase for every alpha (target and interferers)
    /// on every symbol. When false all alphas are real and positive.
    bool draw_interferer_phase = true;
    /// Symbols are generated in fixed-size chunks with one random substream
    /// per chunk, so any worker count gives bit-identical results.
    int workers = 1;
    /// Subtract the a-priori known probe at each user.
    bool cancel_probe = true;

    void validate() const;
};

/// Empirical sum|target|^2 / sum|interference + noise|^2 at the output of the
/// solution's receive beam.
double simulate_radar_sinr(const Scene& scene, const ArrayGeometry& geom, const BeamformingSolution& solution,
                           const SimConfig& cfg);

/// Empirical per-user SINR of y_k = h_k^H x + z_k.
std::vector<double> simulate_cu_sinr(const ChannelSet& channels, const BeamformingSolution& solution,
                                     const SimConfig& cfg);

}  // namespace dfrc
