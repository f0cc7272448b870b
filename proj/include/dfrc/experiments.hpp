// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "dfrc/config.hpp"
#include "dfrc/result_table.hpp"

#include <vector>

namespace dfrc {

struct RunOptions {
    int workers = 1;  // Monte Carlo trials in flight
};

/// Gamma sweep for one set of explicit channels. Rows of series
/// "optimized" per (gamma, mode), the two benchmarks when K = 1, and
/// "time_sharing" chord points. Infeasible gammas give rows with status
/// "infeasible" and empty metrics.
ResultTable run_tradeoff(const ScenarioConfig& cfg);

/// Transmit pattern a_t^T R conj(a_t) and joint pattern E|w^H A(theta) x|^2,
/// each normalised to a 0 dB peak, for every (N, gamma, mode) and angle.
ResultTable run_beampattern(const ScenarioConfig& cfg);

/// Radar SINR per outer iteration for each user count and algorithm.
ResultTable run_convergence(const ScenarioConfig& cfg);

struct McTrial {
    int n = 0;
    int k = 0;
    double gamma_db = 0.0;
    long trial = 0;
    ModeSelect mode = ModeSelect::NonDedicated;
    std::string status;  // ok | infeasible | max_iter | failed
    double radar_sinr = 0.0;
    double tau = 0.0;
};

/// Every (N, K, gamma, trial, mode) solve of a Rayleigh sweep, sorted by
/// that key. Channels for trial t are the same across gammas, modes and K
/// (the first K of one draw).
std::vector<McTrial> run_mc_trials(const ScenarioConfig& cfg, const RunOptions& opt = {});

/// Averages of run_mc_trials per (N, K, gamma, mode); with mode "both"
/// also a "gain" row holding dedicated minus non-dedicated statistics over
/// trials where both solves succeeded.
ResultTable summarize_mc(const std::vector<McTrial>& trials, const ScenarioConfig& cfg);
ResultTable run_mc_sweep(const ScenarioConfig& cfg, const RunOptions& opt = {});

/// Width in degrees of the main lobe around the global peak, measured
/// where the pattern first falls 3 dB below the peak on each side
/// (linear interpolation between grid points).
double main_beam_width_deg(const std::vector<double>& angles_deg, const std::vector<double>& pattern_db);

/// Linear interpolation of a sampled pattern at `angle_deg`.
double pattern_at(const std::vector<double>& angles_deg, const std::vector<double>& pattern_db, double angle_deg);

}  // namespace dfrc
