// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "dfrc/link_sim.hpp"
#include "dfrc/scene_model.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace dfrc {

struct SweepSpec {
    double start = 0.0;
    double stop = 0.0;
    double step = 1.0;
    /// start, start + step, ... up to stop (inclusive within step/1e6).
    std::vector<double> values() const;
    bool operator==(const SweepSpec&) const = default;
};

struct AngleDb {
    double angle_deg = 0.0;
    double power_db = 0.0;
    bool operator==(const AngleDb&) const = default;
};

struct ChannelSpec {
    /// Explicit vectors; lengths may differ when an antenna sweep picks
    /// the vector matching each N_t.
    std::vector<CVector> explicit_channels;
    bool rayleigh = false;
    int count = 0;           // K for rayleigh draws
    std::uint64_t seed = 0;  // rayleigh draws
    bool operator==(const ChannelSpec& o) const;
};

enum class ModeSelect { NonDedicated, Dedicated, Both };

struct ScenarioConfig {
    std::string id = "scenario";
    ArrayGeometry geometry;
    AngleDb target{0.0, 10.0};
    std::vector<AngleDb> interferers;
    double p0_dbm = 20.0;
    ChannelSpec channels;
    std::variant<std::vector<double>, SweepSpec> gammas_db = std::vector<double>{};
    ModeSelect mode = ModeSelect::NonDedicated;
    int mc_trials = 0;
    bool simulate = false;  // emit empirical SINR columns from link_sim
    SimConfig sim;
    double convergence_delta = 1e-3;
    int max_iters = 50;
    SweepSpec angle_grid{-90.0, 90.0, 0.1};
    std::vector<int> antenna_counts;  // empty: geometry only
    std::vector<int> user_counts;     // empty: all channels / channels.count
    std::string output_path;

    bool operator==(const ScenarioConfig& o) const;

    // Linear-domain views, computed once when the config is loaded.
    double p0() const { return p0_; }
    const Scene& scene() const { return *scene_; }
    std::vector<double> gammas_db_list() const;

    /// Geometry with N_t = N_r = n (spacings unchanged).
    ArrayGeometry geometry_for(int n) const;
    /// The first k explicit channels of length n.
    ChannelSet explicit_channels_for(int n, std::size_t k) const;

    /// Recomputes the linear views and checks all invariants. Throws ConfigError.
    void finalize();

private:
    double p0_ = 100.0;
    std::optional<Scene> scene_;
};

ScenarioConfig parse_config(const std::string& json_text);
ScenarioConfig load_config(const std::string& path);
std::string emit_config(const ScenarioConfig& cfg);

/// "re+imj" with full round-trip precision.
std::string format_complex(cplx z);
/// Accepts "a+bj", "a-bi", "bj", "a" with optional spaces. Throws ConfigError.
cplx parse_complex(const std::string& s);

std::string to_string(ModeSelect m);

}  // namespace dfrc
