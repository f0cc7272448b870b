// SPDX-License-Identifier: Apache-2.0
#include "dfrc/radar_core.hpp"

#include <algorithm>

namespace dfrc {

TransmitCovariance::TransmitCovariance(HermitianMatrix r) : r_(std::move(r)) {
    const double tr = r_.trace();
    if (r_.dim() > 0 && min_eigenvalue(r_) < -1e-10 * std::max(tr, 0.0))
        throw InvalidArgument("transmit covariance is not positive semidefinite");
}

TransmitCovariance TransmitCovariance::zero(int n_tx) { return TransmitCovariance(HermitianMatrix::zero(n_tx)); }

TransmitCovariance TransmitCovariance::from_beams(const std::vector<CVector>& beams,
                                                  const std::optional<CVector>& probe) {
    if (beams.empty() && !probe) throw InvalidArgument("no beams given");
    const auto n = static_cast<int>(beams.empty() ? probe->size() : beams.front().size());
    CMatrix r = CMatrix::Zero(n, n);
    for (const auto& u : beams) {
        if (u.size() != n) throw DimensionMismatch("beams differ in length");
        r.noalias() += u * u.adjoint();
    }
    if (probe) {
        if (probe->size() != n) throw DimensionMismatch("probe beam length differs");
        r.noalias() += *probe * probe->adjoint();
    }
    return TransmitCovariance(HermitianMatrix(r));
}

double BeamformingSolution::total_power() const {
    double p = 0.0;
    for (const auto& u : comm_beams) p += u.squaredNorm();
    if (probe_beam) p += probe_beam->squaredNorm();
    return p;
}

HermitianMatrix interference_covariance(const Scene& scene, const TransmitCovariance& r,
                                        const ArrayGeometry& geom) {
    if (r.dim() != geom.n_tx) throw DimensionMismatch("covariance size differs from N_t");
    CMatrix sigma = CMatrix::Identity(geom.n_rx, geom.n_rx);
    for (const auto& intf : scene.interferers()) {
        const CMatrix a = channel_matrix(geom, intf.angle);
        sigma.noalias() += intf.power * (a * r.matrix() * a.adjoint());
    }
    return HermitianMatrix((sigma + sigma.adjoint()) * 0.5);
}

HermitianMatrix radar_gain_matrix(const Scene& scene, const TransmitCovariance& r,
                                  const ArrayGeometry& geom) {
    const auto sigma = interference_covariance(scene, r, geom);
    const CMatrix a0 = channel_matrix(geom, scene.target_angle());
    Eigen::LLT<CMatrix> llt(sigma.matrix());
    if (llt.info() != Eigen::Success) throw NotPositiveDefinite("interference covariance factorisation failed");
    CMatrix phi = scene.target_power() * (a0.adjoint() * llt.solve(a0));
    return HermitianMatrix((phi + phi.adjoint()) * 0.5);
}

CVector mvdr_receiver(const Scene& scene, const TransmitCovariance& r, const ArrayGeometry& geom,
                      const CVector& x) {
    if (x.size() != geom.n_tx) throw DimensionMismatch("transmit vector length differs from N_t");
    const CVector ax = channel_matrix(geom, scene.target_angle()) * x;
    if (!(ax.norm() >= 1e-12 * x.norm()) || x.norm() == 0.0)
        throw DegenerateSteering("transmit vector has no component toward the target");
    const CVector sinv_ax = solve_hpd(interference_covariance(scene, r, geom), ax);
    return sinv_ax / ax.dot(sinv_ax);
}

double radar_sinr_for_receiver(const Scene& scene, const TransmitCovariance& r,
                               const ArrayGeometry& geom, const CVector& w, const CVector& x) {
    const auto sigma = interference_covariance(scene, r, geom);
    const cplx target = w.dot(channel_matrix(geom, scene.target_angle()) * x);
    const double denom = w.dot(sigma.matrix() * w).real();
    return scene.target_power() * std::norm(target) / denom;
}

double avg_radar_sinr(const HermitianMatrix& phi, const TransmitCovariance& r) {
    if (phi.dim() != r.dim()) throw DimensionMismatch("Phi and R differ in size");
    // tr(Phi R) = sum_ij Phi_ij R_ji = sum_ij Phi_ij conj(R_ij)
    return std::max(0.0, phi.matrix().cwiseProduct(r.matrix().conjugate()).sum().real());
}

std::vector<double> cu_sinr(const ChannelSet& channels, const std::vector<CVector>& beams, bool cancel_probe,
                            const std::optional<CVector>& probe) {
    if (beams.size() != channels.size()) throw DimensionMismatch("one beam per user required");
    for (const auto& u : beams)
        if (u.size() != channels.n_tx()) throw DimensionMismatch("beam length differs from N_t");
    if (probe && probe->size() != channels.n_tx()) throw DimensionMismatch("probe length differs from N_t");

    std::vector<double> out(beams.size());
    for (std::size_t k = 0; k < beams.size(); ++k) {
        const CVector& h = channels[k];
        double interference = 1.0;
        for (std::size_t j = 0; j < beams.size(); ++j)
            if (j != k) interference += std::norm(h.dot(beams[j]));
        if (probe && !cancel_probe) interference += std::norm(h.dot(*probe));
        out[k] = std::norm(h.dot(beams[k])) / interference;
    }
    return out;
}

void finalize_solution(BeamformingSolution& sol, const Scene& scene, const ArrayGeometry& geom,
                       const ChannelSet& channels, double p0) {
    const auto r = sol.covariance();
    sol.radar_sinr = avg_radar_sinr(radar_gain_matrix(scene, r, geom), r);
    sol.cu_sinrs = cu_sinr(channels, sol.comm_beams, true, sol.probe_beam);
    sol.probe_power_fraction = sol.probe_beam ? sol.probe_beam->squaredNorm() / p0 : 0.0;

    // A(theta_0) has rank one, so the MVDR direction does not depend on which
    // transmit vector is used; pick the stream with the strongest target gain.
    const CVector at = steering_tx(geom, scene.target_angle());
    const CVector* best = nullptr;
    double gain = -1.0;
    auto consider = [&](const CVector& x) {
        const double g = std::abs(at.conjugate().dot(x));
        if (g > gain) {
            gain = g;
            best = &x;
        }
    };
    for (const auto& u : sol.comm_beams) consider(u);
    if (sol.probe_beam) consider(*sol.probe_beam);
    if (gain > 1e-12 * best->norm() && best->norm() > 0.0) {
        sol.rx_beam = mvdr_receiver(scene, r, geom, *best);
        return;
    }
    // Nothing reaches the target (radar SINR 0); keep the MVDR direction
    // normalised on the receive steering vector alone.
    const CVector ar = steering_rx(geom, scene.target_angle());
    const CVector sinv_ar = solve_hpd(interference_covariance(scene, r, geom), ar);
    sol.rx_beam = sinv_ar / ar.dot(sinv_ar);
}

}  // namespace dfrc
