// SPDX-License-Identifier: Apache-2.0
#include "dfrc/link_sim.hpp"

#include "dfrc/errors.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <thread>

namespace dfrc {

namespace {

constexpr long kChunk = 4096;

struct Accum {
    double signal = 0.0;
    double rest = 0.0;
};

std::mt19937_64 substream(std::uint64_t seed, std::uint64_t stream, std::uint64_t chunk) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(chunk),
                      static_cast<std::uint32_t>(chunk >> 32)};
    return std::mt19937_64(seq);
}

class Gaussian {
public:
    explicit Gaussian(std::mt19937_64& rng) : rng_(rng) {}
    cplx cn() { return {d_(rng_), d_(rng_)}; }  // CN(0, 1)
    cplx phase() { return std::polar(1.0, u_(rng_)); }

private:
    std::mt19937_64& rng_;
    std::normal_distribution<double> d_{0.0, std::sqrt(0.5)};
    std::uniform_real_distribution<double> u_{0.0, 2.0 * kPi};
};

// Runs fn(chunk_index, first_symbol, count) -> Accum for every chunk, spread
// over the configured workers, and returns per-chunk results in order.
template <class Fn>
std::vector<Accum> for_chunks(const SimConfig& cfg, Fn fn) {
    const long chunks = (cfg.n_symbols + kChunk - 1) / kChunk;
    std::vector<Accum> out(static_cast<std::size_t>(chunks));
    const int workers = std::max(1, std::min<int>(cfg.workers, static_cast<int>(chunks)));
    auto work = [&](int w) {
        for (long c = w; c < chunks; c += workers)
            out[static_cast<std::size_t>(c)] = fn(c, std::min(kChunk, cfg.n_symbols - c * kChunk));
    };
    if (workers == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(work, w);
        for (auto& t : pool) t.join();
    }
    return out;
}

struct Streams {
    std::vector<CVector> beams;  // comm beams then the probe
    std::size_t n_comm = 0;
};

Streams streams_of(const BeamformingSolution& s) {
    Streams st;
    st.beams = s.comm_beams;
    st.n_comm = s.comm_beams.size();
    if (s.probe_beam) st.beams.push_back(*s.probe_beam);
    return st;
}

}  // namespace

void SimConfig::validate() const {
    if (n_symbols < 1) throw InvalidArgument("n_symbols must be at least 1");
    if (workers < 1) throw InvalidArgument("workers must be at least 1");
}

double simulate_radar_sinr(const Scene& scene, const ArrayGeometry& geom, const BeamformingSolution& solution,
                           const SimConfig& cfg) {
    cfg.validate();
    const auto st = streams_of(solution);
    if (solution.rx_beam.size() != geom.n_rx) throw DimensionMismatch("receive beam length differs from N_r");
    const CVector& w = solution.rx_beam;

    // w^H A(theta) x = (w^H a_r)(a_t^T x), so each angle reduces to a scalar
    // gain per transmit stream.
    const auto& itf = scene.interferers();
    auto stream_gains = [&](double angle) {
        const CVector ar = steering_rx(geom, angle);
        const CVector at = steering_tx(geom, angle);
        const cplx wa = w.dot(ar);
        CVector g(static_cast<Eigen::Index>(st.beams.size()));
        for (std::size_t s = 0; s < st.beams.size(); ++s)
            g[static_cast<Eigen::Index>(s)] = wa * at.transpose() * st.beams[s];
        return g;
    };
    const CVector g0 = stream_gains(scene.target_angle()) * std::sqrt(scene.target_power());
    std::vector<CVector> gi;
    for (const auto& i : itf) gi.push_back(stream_gains(i.angle) * std::sqrt(i.power));
    const auto n_streams = static_cast<Eigen::Index>(st.beams.size());
    const auto n_rx = geom.n_rx;

    const auto parts = for_chunks(cfg, [&](long chunk, long count) {
        auto rng = substream(cfg.seed, 0, static_cast<std::uint64_t>(chunk));
        Gaussian gauss(rng);
        Accum acc;
        CVector sym(n_streams);
        for (long t = 0; t < count; ++t) {
            for (Eigen::Index s = 0; s < n_streams; ++s) sym[s] = gauss.cn();
            cplx target = g0.transpose() * sym;
            if (cfg.draw_interferer_phase) target *= gauss.phase();
            cplx rest = 0.0;
            for (const auto& g : gi) {
                cplx term = g.transpose() * sym;
                if (cfg.draw_interferer_phase) term *= gauss.phase();
                rest += term;
            }
            cplx noise = 0.0;
            for (Eigen::Index r = 0; r < n_rx; ++r) noise += std::conj(w[r]) * gauss.cn();
            rest += noise;
            acc.signal += std::norm(target);
            acc.rest += std::norm(rest);
        }
        return acc;
    });
    Accum total;
    for (const auto& a : parts) {
        total.signal += a.signal;
        total.rest += a.rest;
    }
    return total.signal / total.rest;
}

std::vector<double> simulate_cu_sinr(const ChannelSet& channels, const BeamformingSolution& solution,
                                     const SimConfig& cfg) {
    cfg.validate();
    const auto st = streams_of(solution);
    if (st.n_comm != channels.size()) throw DimensionMismatch("one beam per user required");
    const bool has_probe = st.beams.size() > st.n_comm;
    const auto n_streams = static_cast<Eigen::Index>(st.beams.size());

    std::vector<double> out;
    for (std::size_t k = 0; k < channels.size(); ++k) {
        CVector gain(n_streams);
        for (Eigen::Index s = 0; s < n_streams; ++s) gain[s] = channels[k].dot(st.beams[static_cast<std::size_t>(s)]);
        const auto parts = for_chunks(cfg, [&](long chunk, long count) {
            auto rng = substream(cfg.seed, 1 + k, static_cast<std::uint64_t>(chunk));
            Gaussian gauss(rng);
            Accum acc;
            for (long t = 0; t < count; ++t) {
                cplx signal = 0.0, rest = 0.0;
                for (Eigen::Index s = 0; s < n_streams; ++s) {
                    const cplx term = gain[s] * gauss.cn();
                    const bool probe = has_probe && s + 1 == n_streams;
                    if (static_cast<std::size_t>(s) == k) signal = term;
                    else if (!(probe && cfg.cancel_probe)) rest += term;
                }
                rest += gauss.cn();
                acc.signal += std::norm(signal);
                acc.rest += std::norm(rest);
            }
            return acc;
        });
        Accum total;
        for (const auto& a : parts) {
            total.signal += a.signal;
            total.rest += a.rest;
        }
        out.push_back(total.signal / total.rest);
    }
    return out;
}

}  // namespace dfrc
