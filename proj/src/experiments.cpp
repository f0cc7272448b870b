// SPDX-License-Identifier: Apache-2.0
#include "dfrc/experiments.hpp"

#include "dfrc/errors.hpp"
#include "dfrc/link_sim.hpp"
#include "dfrc/multi_cu.hpp"
#include "dfrc/single_cu.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <optional>
#include <random>
#include <thread>

namespace dfrc {

namespace {

struct Outcome {
    std::string status;  // ok | infeasible | max_iter
    std::optional<BeamformingSolution> sol;
};

std::vector<bool> modes_of(ModeSelect m) {
    switch (m) {
        case ModeSelect::NonDedicated: return {false};
        case ModeSelect::Dedicated: return {true};
        case ModeSelect::Both: return {false, true};
    }
    return {false};
}

std::string mode_name(bool dedicated) { return dedicated ? "dedicated" : "non-dedicated"; }

BeamformingSolution solve_point(const ScenarioConfig& cfg, const ArrayGeometry& geom, const ChannelSet& ch,
                                double gamma, bool dedicated) {
    if (ch.size() == 1 && !dedicated) {
        const SingleCuProblem p{cfg.scene(), geom, ch[0], gamma, cfg.p0(), cfg.convergence_delta, cfg.max_iters};
        return algorithm1(p);
    }
    const MultiCuProblem p{cfg.scene(), geom, ch, std::vector<double>(ch.size(), gamma), cfg.p0(),
                           cfg.convergence_delta, cfg.max_iters, dedicated};
    return solve_multi_cu(p);
}

Outcome attempt(const ScenarioConfig& cfg, const ArrayGeometry& geom, const ChannelSet& ch, double gamma,
                bool dedicated) {
    try {
        return {"ok", solve_point(cfg, geom, ch, gamma, dedicated)};
    } catch (const Infeasible&) {
        return {"infeasible", std::nullopt};
    } catch (const NoConvergence& e) {
        return {"max_iter", e.best()};
    }
}

std::size_t users_for(const ScenarioConfig& cfg, int n) {
    if (!cfg.user_counts.empty()) return static_cast<std::size_t>(cfg.user_counts.front());
    std::size_t k = 0;
    for (const auto& h : cfg.channels.explicit_channels) k += h.size() == n;
    return std::max<std::size_t>(k, 1);
}

std::vector<int> antenna_list(const ScenarioConfig& cfg) {
    if (!cfg.antenna_counts.empty()) return cfg.antenna_counts;
    return {cfg.geometry.n_tx};
}

std::string join_beams(const std::vector<CVector>& beams) {
    std::string out;
    for (std::size_t i = 0; i < beams.size(); ++i) out += (i ? "|" : "") + format_complex_vector(beams[i]);
    return out;
}

std::vector<double> dbs(const std::vector<double>& v) {
    std::vector<double> out;
    for (double x : v) out.push_back(to_db(x));
    return out;
}

const std::vector<std::string> kTradeoffColumns = {
    "scenario", "series", "mode", "K", "n_tx", "n_rx", "gamma", "gamma_db", "status", "radar_sinr", "radar_sinr_db",
    "cu_sinrs", "cu_sinrs_db", "tau", "iterations", "trace", "empirical_radar_sinr", "empirical_radar_sinr_db",
    "empirical_cu_sinrs_db", "comm_beams", "probe_beam", "rx_beam"};

void fill_solution(ResultTable& t, const BeamformingSolution& s, const ScenarioConfig& cfg, const ArrayGeometry& geom,
                   const ChannelSet& ch) {
    t.set_db("radar_sinr", s.radar_sinr);
    t.set("cu_sinrs", format_list(s.cu_sinrs));
    t.set("cu_sinrs_db", format_list(dbs(s.cu_sinrs)));
    t.set("tau", s.probe_power_fraction);
    t.set("iterations", static_cast<long>(s.iterations));
    t.set("trace", format_list(s.trace));
    t.set("comm_beams", join_beams(s.comm_beams));
    if (s.probe_beam) t.set("probe_beam", format_complex_vector(*s.probe_beam));
    t.set("rx_beam", format_complex_vector(s.rx_beam));
    if (cfg.simulate) {
        t.set_db("empirical_radar_sinr", simulate_radar_sinr(cfg.scene(), geom, s, cfg.sim));
        t.set("empirical_cu_sinrs_db", format_list(dbs(simulate_cu_sinr(ch, s, cfg.sim))));
    }
}

void common_columns(ResultTable& t, const ScenarioConfig& cfg, const std::string& series, const std::string& mode,
                    std::size_t k, const ArrayGeometry& geom) {
    t.new_row();
    t.set("scenario", cfg.id);
    t.set("series", series);
    t.set("mode", mode);
    t.set("K", static_cast<long>(k));
    t.set("n_tx", static_cast<long>(geom.n_tx));
    t.set("n_rx", static_cast<long>(geom.n_rx));
}

std::mt19937_64 trial_stream(std::uint64_t seed, int n, long trial) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(n), static_cast<std::uint32_t>(trial),
                      static_cast<std::uint32_t>(static_cast<std::uint64_t>(trial) >> 32)};
    return std::mt19937_64(seq);
}

}  // namespace

ResultTable run_tradeoff(const ScenarioConfig& cfg) {
    const auto& geom = cfg.geometry;
    const std::size_t k = users_for(cfg, geom.n_tx);
    const auto ch = cfg.explicit_channels_for(geom.n_tx, k);
    ResultTable t(kTradeoffColumns);

    for (double gdb : cfg.gammas_db_list()) {
        for (bool dedicated : modes_of(cfg.mode)) {
            const double gamma = from_db(gdb);
            const auto out = attempt(cfg, geom, ch, gamma, dedicated);
            common_columns(t, cfg, "optimized", mode_name(dedicated), k, geom);
            t.set_db("gamma", gamma);
            t.set("status", out.status);
            if (out.sol) fill_solution(t, *out.sol, cfg, geom, ch);
        }
    }
    if (k != 1) return t;

    // Radar benchmark: SINR constraint switched off. Communication benchmark:
    // the largest feasible target, reached by maximum-ratio transmission.
    const SingleCuProblem radar_p{cfg.scene(), geom, ch[0], 0.0, cfg.p0(), cfg.convergence_delta, cfg.max_iters};
    const auto radar_b = algorithm1(radar_p);
    auto comm_p = radar_p;
    comm_p.gamma = cfg.p0() * ch[0].squaredNorm();
    const auto comm_b = algorithm1(comm_p);
    common_columns(t, cfg, "radar_benchmark", mode_name(false), k, geom);
    t.set("status", std::string("ok"));
    fill_solution(t, radar_b, cfg, geom, ch);
    common_columns(t, cfg, "communication_benchmark", mode_name(false), k, geom);
    t.set_db("gamma", comm_p.gamma);
    t.set("status", std::string("ok"));
    fill_solution(t, comm_b, cfg, geom, ch);

    // Alternating between the two benchmark beams in time averages both
    // SINRs linearly.
    const double c0 = radar_b.cu_sinrs[0], c1 = comm_b.cu_sinrs[0];
    const double r0 = radar_b.radar_sinr, r1 = comm_b.radar_sinr;
    for (double gdb : cfg.gammas_db_list()) {
        const double gamma = from_db(gdb);
        if (gamma > c1 * (1 + 1e-12)) continue;
        const double frac = gamma <= c0 ? 0.0 : std::min(1.0, (gamma - c0) / (c1 - c0));
        common_columns(t, cfg, "time_sharing", mode_name(false), k, geom);
        t.set_db("gamma", gamma);
        t.set("status", std::string("ok"));
        t.set_db("radar_sinr", (1 - frac) * r0 + frac * r1);
        const double cu = (1 - frac) * c0 + frac * c1;
        t.set("cu_sinrs", format_number(cu));
        t.set("cu_sinrs_db", format_number(to_db(cu)));
        t.set("tau", 0.0);
    }
    return t;
}

// Exact nulls would give -inf dB; patterns are floored at -300 dB.
constexpr double kPatternFloor = 1e-30;

ResultTable run_beampattern(const ScenarioConfig& cfg) {
    ResultTable t({"scenario", "mode", "K", "n_tx", "n_rx", "gamma_db", "status", "angle_deg", "transmit_pattern",
                   "transmit_pattern_db", "joint_pattern", "joint_pattern_db"});
    const auto angles = cfg.angle_grid.values();
    for (int n : antenna_list(cfg)) {
        const auto geom = cfg.geometry_for(n);
        const std::size_t k = users_for(cfg, n);
        const auto ch = cfg.explicit_channels_for(n, k);
        for (double gdb : cfg.gammas_db_list()) {
            for (bool dedicated : modes_of(cfg.mode)) {
                const auto out = attempt(cfg, geom, ch, from_db(gdb), dedicated);
                auto head = [&] {
                    t.new_row();
                    t.set("scenario", cfg.id);
                    t.set("mode", mode_name(dedicated));
                    t.set("K", static_cast<long>(k));
                    t.set("n_tx", static_cast<long>(geom.n_tx));
                    t.set("n_rx", static_cast<long>(geom.n_rx));
                    t.set("gamma_db", gdb);
                    t.set("status", out.status);
                };
                if (!out.sol) {
                    head();
                    continue;
                }
                const auto r = out.sol->covariance();
                const CVector& w = out.sol->rx_beam;
                std::vector<double> tx, joint;
                for (double a : angles) {
                    const double th = deg_to_rad(a);
                    const CVector at = steering_tx(geom, th);
                    const double p = (at.transpose() * r.matrix() * at.conjugate()).value().real();
                    tx.push_back(std::max(p, 0.0));
                    joint.push_back(std::norm(w.dot(steering_rx(geom, th))) * tx.back());
                }
                const double tx_peak = *std::max_element(tx.begin(), tx.end());
                const double joint_peak = *std::max_element(joint.begin(), joint.end());
                for (std::size_t i = 0; i < angles.size(); ++i) {
                    head();
                    t.set("angle_deg", angles[i]);
                    t.set_db("transmit_pattern", std::max(tx[i] / tx_peak, kPatternFloor));
                    t.set_db("joint_pattern", std::max(joint[i] / joint_peak, kPatternFloor));
                }
            }
        }
    }
    return t;
}

ResultTable run_convergence(const ScenarioConfig& cfg) {
    ResultTable t({"scenario", "algorithm", "mode", "K", "n_tx", "gamma_db", "status", "iteration", "radar_sinr",
                   "radar_sinr_db", "iterations", "tau"});
    const auto& geom = cfg.geometry;
    std::vector<int> ks = cfg.user_counts;
    if (ks.empty())
        for (std::size_t k = 1; k <= users_for(cfg, geom.n_tx); ++k) ks.push_back(static_cast<int>(k));

    for (double gdb : cfg.gammas_db_list()) {
        const double gamma = from_db(gdb);
        for (int k : ks) {
            const auto ch = cfg.explicit_channels_for(geom.n_tx, static_cast<std::size_t>(k));
            struct Run {
                std::string name;
                bool dedicated;
            };
            std::vector<Run> runs;
            if (k == 1 && cfg.mode != ModeSelect::Dedicated) runs.push_back({"algorithm1", false});
            for (bool d : modes_of(cfg.mode)) runs.push_back({d ? "algorithm3" : "algorithm2", d});
            for (const auto& run : runs) {
                Outcome out;
                try {
                    if (run.name == "algorithm1") {
                        out = {"ok", algorithm1({cfg.scene(), geom, ch[0], gamma, cfg.p0(), cfg.convergence_delta,
                                                 cfg.max_iters})};
                    } else {
                        const MultiCuProblem p{cfg.scene(), geom, ch, std::vector<double>(ch.size(), gamma),
                                               cfg.p0(), cfg.convergence_delta, cfg.max_iters, run.dedicated};
                        out = {"ok", solve_multi_cu(p)};
                    }
                } catch (const Infeasible&) {
                    out = {"infeasible", std::nullopt};
                } catch (const NoConvergence& e) {
                    out = {"max_iter", e.best()};
                }
                auto head = [&] {
                    t.new_row();
                    t.set("scenario", cfg.id);
                    t.set("algorithm", run.name);
                    t.set("mode", mode_name(run.dedicated));
                    t.set("K", static_cast<long>(k));
                    t.set("n_tx", static_cast<long>(geom.n_tx));
                    t.set("gamma_db", gdb);
                    t.set("status", out.status);
                };
                if (!out.sol) {
                    head();
                    continue;
                }
                for (std::size_t m = 0; m < out.sol->trace.size(); ++m) {
                    head();
                    t.set("iteration", static_cast<long>(m));
                    t.set_db("radar_sinr", out.sol->trace[m]);
                    t.set("iterations", static_cast<long>(out.sol->iterations));
                    t.set("tau", out.sol->probe_power_fraction);
                }
            }
        }
    }
    return t;
}

std::vector<McTrial> run_mc_trials(const ScenarioConfig& cfg, const RunOptions& opt) {
    if (!cfg.channels.rayleigh) throw ConfigError("mc-sweep needs rayleigh channels");
    const auto ns = antenna_list(cfg);
    std::vector<int> ks = cfg.user_counts;
    if (ks.empty()) ks.push_back(cfg.channels.count);
    const int k_max = *std::max_element(ks.begin(), ks.end());
    const auto gammas = cfg.gammas_db_list();
    const auto modes = modes_of(cfg.mode);
    const long trials = cfg.mc_trials;

    struct Item {
        int n;
        long trial;
    };
    std::vector<Item> items;
    for (int n : ns)
        for (long tr = 0; tr < trials; ++tr) items.push_back({n, tr});
    std::vector<std::vector<McTrial>> results(items.size());

    auto work = [&](std::size_t i) {
        const auto [n, tr] = items[i];
        auto rng = trial_stream(cfg.channels.seed, n, tr);
        std::normal_distribution<double> d(0.0, std::sqrt(0.5));
        std::vector<CVector> draw;
        for (int k = 0; k < k_max; ++k) {
            CVector h(n);
            for (int e = 0; e < n; ++e) h[e] = cplx(d(rng), d(rng));
            draw.push_back(h);
        }
        const auto geom = cfg.geometry_for(n);
        const ChannelSet all(draw);
        for (int k : ks) {
            const auto ch = all.first(static_cast<std::size_t>(k));
            for (double gdb : gammas) {
                for (bool dedicated : modes) {
                    McTrial rec{n, k, gdb, tr, dedicated ? ModeSelect::Dedicated : ModeSelect::NonDedicated, "ok"};
                    try {
                        const MultiCuProblem p{cfg.scene(), geom, ch, std::vector<double>(ch.size(), from_db(gdb)),
                                               cfg.p0(), cfg.convergence_delta, cfg.max_iters, dedicated};
                        const auto s = solve_multi_cu(p);
                        rec.radar_sinr = s.radar_sinr;
                        rec.tau = s.probe_power_fraction;
                    } catch (const Infeasible&) {
                        rec.status = "infeasible";
                    } catch (const NoConvergence&) {
                        rec.status = "max_iter";
                    } catch (const Error&) {
                        rec.status = "failed";
                    }
                    results[i].push_back(rec);
                }
            }
        }
    };

    const int workers = std::max(1, std::min<int>(opt.workers, static_cast<int>(items.size())));
    if (workers == 1) {
        for (std::size_t i = 0; i < items.size(); ++i) work(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < items.size(); i = next++) work(i);
            });
        for (auto& th : pool) th.join();
    }

    std::vector<McTrial> flat;
    for (auto& r : results) flat.insert(flat.end(), r.begin(), r.end());
    std::stable_sort(flat.begin(), flat.end(), [](const McTrial& a, const McTrial& b) {
        return std::tie(a.n, a.k, a.gamma_db, a.trial, a.mode) < std::tie(b.n, b.k, b.gamma_db, b.trial, b.mode);
    });
    return flat;
}

ResultTable summarize_mc(const std::vector<McTrial>& trials, const ScenarioConfig& cfg) {
    ResultTable t({"scenario", "mode", "K", "n_tx", "gamma_db", "trials", "feasible_trials", "infeasible_trials",
                   "failed_trials", "avg_radar_sinr_db", "mean_linear_radar_sinr", "mean_linear_radar_sinr_db",
                   "avg_tau", "min_gain_db", "max_gain_db"});
    using Key = std::tuple<int, int, double>;
    struct Stat {
        long trials = 0, ok = 0, infeasible = 0, failed = 0;
        double sum_db = 0, sum_lin = 0, sum_tau = 0;
    };
    std::map<Key, std::map<ModeSelect, Stat>> stats;
    std::map<Key, std::map<long, std::map<ModeSelect, double>>> paired;
    for (const auto& r : trials) {
        const Key key{r.n, r.k, r.gamma_db};
        auto& s = stats[key][r.mode];
        ++s.trials;
        if (r.status == "ok") {
            ++s.ok;
            s.sum_db += to_db(r.radar_sinr);
            s.sum_lin += r.radar_sinr;
            s.sum_tau += r.tau;
            paired[key][r.trial][r.mode] = to_db(r.radar_sinr);
        } else if (r.status == "infeasible") {
            ++s.infeasible;
        } else {
            ++s.failed;
        }
    }
    for (const auto& [key, by_mode] : stats) {
        const auto [n, k, gdb] = key;
        auto head = [&, n = n, k = k, gdb = gdb](const std::string& mode) {
            t.new_row();
            t.set("scenario", cfg.id);
            t.set("mode", mode);
            t.set("K", static_cast<long>(k));
            t.set("n_tx", static_cast<long>(n));
            t.set("gamma_db", gdb);
        };
        for (const auto& [mode, s] : by_mode) {
            head(to_string(mode));
            t.set("trials", s.trials);
            t.set("feasible_trials", s.ok);
            t.set("infeasible_trials", s.infeasible);
            t.set("failed_trials", s.failed);
            if (s.ok > 0) {
                t.set("avg_radar_sinr_db", s.sum_db / static_cast<double>(s.ok));
                t.set_db("mean_linear_radar_sinr", s.sum_lin / static_cast<double>(s.ok));
                t.set("avg_tau", s.sum_tau / static_cast<double>(s.ok));
            }
        }
        if (cfg.mode != ModeSelect::Both) continue;
        long both = 0;
        double sum = 0, lo = 1e300, hi = -1e300;
        for (const auto& [trial, m] : paired[key]) {
            if (m.size() != 2) continue;
            const double g = m.at(ModeSelect::Dedicated) - m.at(ModeSelect::NonDedicated);
            ++both;
            sum += g;
            lo = std::min(lo, g);
            hi = std::max(hi, g);
        }
        head("gain");
        t.set("trials", both);
        if (both > 0) {
            t.set("avg_radar_sinr_db", sum / static_cast<double>(both));
            t.set("min_gain_db", lo);
            t.set("max_gain_db", hi);
        }
    }
    return t;
}

ResultTable run_mc_sweep(const ScenarioConfig& cfg, const RunOptions& opt) {
    return summarize_mc(run_mc_trials(cfg, opt), cfg);
}

double pattern_at(const std::vector<double>& angles, const std::vector<double>& pattern, double angle) {
    if (angles.size() != pattern.size() || angles.size() < 2) throw DimensionMismatch("pattern and grid differ");
    if (angle <= angles.front()) return pattern.front();
    if (angle >= angles.back()) return pattern.back();
    const auto it = std::upper_bound(angles.begin(), angles.end(), angle);
    const std::size_t i = static_cast<std::size_t>(it - angles.begin());
    const double f = (angle - angles[i - 1]) / (angles[i] - angles[i - 1]);
    return pattern[i - 1] + f * (pattern[i] - pattern[i - 1]);
}

double main_beam_width_deg(const std::vector<double>& angles, const std::vector<double>& pattern) {
    if (angles.size() != pattern.size() || angles.size() < 3) throw DimensionMismatch("pattern and grid differ");
    const auto peak_it = std::max_element(pattern.begin(), pattern.end());
    const std::size_t peak = static_cast<std::size_t>(peak_it - pattern.begin());
    const double level = *peak_it - 3.0;
    auto crossing = [&](std::size_t a, std::size_t b) {
        const double f = (pattern[a] - level) / (pattern[a] - pattern[b]);
        return angles[a] + f * (angles[b] - angles[a]);
    };
    std::size_t l = peak;
    while (l > 0 && pattern[l - 1] >= level) --l;
    std::size_t r = peak;
    while (r + 1 < pattern.size() && pattern[r + 1] >= level) ++r;
    const double left = l == 0 ? angles.front() : crossing(l, l - 1);
    const double right = r + 1 == pattern.size() ? angles.back() : crossing(r, r + 1);
    return right - left;
}

}  // namespace dfrc
