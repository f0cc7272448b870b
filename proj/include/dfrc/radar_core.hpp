// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "dfrc/errors.hpp"
#include "dfrc/hermitian.hpp"
#include "dfrc/scene_model.hpp"

#include <optional>
#include <vector>

namespace dfrc {

/// R = sum_k u_k u_k^H + v v^H. Every radar quantity depends on the transmit
/// beams only through this matrix, which is what lets one set of formulas
/// serve the single-user, multi-user, with-probe and without-probe cases.
class TransmitCovariance {
public:
    /// Throws InvalidArgument if min eigenvalue < -1e-10 * trace.
    explicit TransmitCovariance(HermitianMatrix r);

    static TransmitCovariance zero(int n_tx);
    static TransmitCovariance from_beams(const std::vector<CVector>& beams,
                                         const std::optional<CVector>& probe = std::nullopt);

    const HermitianMatrix& hermitian() const { return r_; }
    const CMatrix& matrix() const { return r_.matrix(); }
    int dim() const { return r_.dim(); }
    double power() const { return r_.trace(); }

private:
    HermitianMatrix r_;
};

struct BeamformingSolution {
    std::vector<CVector> comm_beams;
    std::optional<CVector> probe_beam;
    CVector rx_beam;
    double radar_sinr = 0.0;  // linear, tr(Phi(R) R)
    std::vector<double> cu_sinrs;
    double probe_power_fraction = 0.0;  // tau = |v|^2 / P0
    int iterations = 0;
    /// Average radar SINR at u^(0), u^(1), ..., u^(iterations).
    std::vector<double> trace;

    TransmitCovariance covariance() const { return TransmitCovariance::from_beams(comm_beams, probe_beam); }
    double total_power() const;
};

/// Raised when an outer loop hits its iteration cap. Carries the best iterate.
class NoConvergence : public Error {
public:
    NoConvergence(const std::string& what, BeamformingSolution best)
        : Error(what), best_(std::move(best)) {}
    const BeamformingSolution& best() const { return best_; }

private:
    BeamformingSolution best_;
};

/// Sigma(R) = sum_i |alpha_i|^2 A(theta_i) R A(theta_i)^H + I, of size N_r.
HermitianMatrix interference_covariance(const Scene& scene, const TransmitCovariance& r,
                                        const ArrayGeometry& geom);

/// Phi(R) = |alpha_0|^2 A(theta_0)^H Sigma(R)^{-1} A(theta_0), of size N_t.
HermitianMatrix radar_gain_matrix(const Scene& scene, const TransmitCovariance& r,
                                  const ArrayGeometry& geom);

/// MVDR receiver normalised to w^H A(theta_0) x = 1.
/// Throws DegenerateSteering if |A(theta_0) x| < 1e-12 |x|.
CVector mvdr_receiver(const Scene& scene, const TransmitCovariance& r, const ArrayGeometry& geom,
                      const CVector& x);

/// Instantaneous radar SINR for a given receiver w and transmit vector x,
/// with the interference averaged over R.
double radar_sinr_for_receiver(const Scene& scene, const TransmitCovariance& r,
                               const ArrayGeometry& geom, const CVector& w, const CVector& x);

/// tr(Phi R).
double avg_radar_sinr(const HermitianMatrix& phi, const TransmitCovariance& r);

/// Per-user SINR |h_k^H u_k|^2 / (1 + sum_{j!=k} |h_k^H u_j|^2). When the
/// probe is not cancelled its leakage |h_k^H v|^2 is added to the denominator.
std::vector<double> cu_sinr(const ChannelSet& channels, const std::vector<CVector>& beams,
                            bool cancel_probe = true, const std::optional<CVector>& probe = std::nullopt);

/// Fills rx_beam, radar_sinr, cu_sinrs and tau from the transmit beams.
void finalize_solution(BeamformingSolution& sol, const Scene& scene, const ArrayGeometry& geom,
                       const ChannelSet& channels, double p0);

}  // namespace dfrc
