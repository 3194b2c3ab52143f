#pragma once

#include <algorithm>
#include <cmath>
#include <complex>

#include "esd/complex_matrix.hpp"
#include "esd/eigen.hpp"
#include "esd/errors.hpp"
#include "esd/states.hpp"

namespace esd {

/// A single witness measurement W_theta = 1 - 2 |Phi(theta)><Phi(theta)|:
/// the probability P = <Phi(theta)|rho|Phi(theta)> and the expectation
/// W = 1 - 2P.
struct WitnessReading {
    double theta = 0.0;
    double probability = 0.0;
    double expectation = 1.0;
};

inline ComplexMatrix spin_flip_operator() { return kron(sigma_y(), sigma_y()); }

/// Wootters concurrence of a two-qubit state: with lambda_i the decreasingly
/// sorted eigenvalues of rho (sigma_y x sigma_y) rho* (sigma_y x sigma_y),
/// C = max{0, sqrt(l1) - sqrt(l2) - sqrt(l3) - sqrt(l4)}.
///
/// The sqrt(lambda_i) are evaluated as the singular values of tau = V^T S V,
/// where rho = V V^dag is the (sub-normalized) eigendecomposition and
/// S = sigma_y x sigma_y. This is the same set of numbers -- eig(rho rho~) =
/// eig(tau* tau) = singular values squared -- but the near-zero ones come out
/// with absolute accuracy ~1e-15 instead of the ~1e-8 noise a direct square
/// root of near-zero eigenvalues would give.
inline double concurrence(const DensityMatrix& rho) {
    if (rho.dim() != 4) throw DimensionMismatch("concurrence: state must be two-qubit (4x4)");

    const HermitianEigh eig = hermitian_eigh(rho.matrix());
    ComplexMatrix v = eig.vectors;
    for (std::size_t j = 0; j < 4; ++j) {
        // eigenvalues of rho in [-1e-9, 0) count as 0
        const double mu = std::max(eig.values[j], 0.0);
        const double root = std::sqrt(mu);
        for (std::size_t i = 0; i < 4; ++i) v(i, j) *= root;
    }
    const ComplexMatrix tau = transpose(v) * spin_flip_operator() * v;
    const std::vector<double> sv = singular_values(tau);
    const double c = sv[0] - sv[1] - sv[2] - sv[3];
    return std::clamp(c, 0.0, 1.0);
}

/// Closed form for the symmetric X family: C = max{0, 2|z| - 2x}. The state
/// is entangled iff |z| > x.
inline double concurrence_xstate(const XStateParams& p) {
    p.validate();
    return std::max(0.0, 2.0 * std::abs(p.z) - 2.0 * p.x);
}

/// P = <Phi(theta)|rho|Phi(theta)>, computed directly as Tr[rho |Phi><Phi|].
/// For an X-form rho at the phase aligned with its coherence this equals
/// [1 - 2x + 2|z|]/2.
inline double probability_phi(const DensityMatrix& rho, double theta) {
    if (rho.dim() != 4) throw DimensionMismatch("probability_phi: state must be 4x4");
    return trace(rho.matrix() * bell_phi(theta).matrix()).real();
}

inline WitnessReading witness_reading(const DensityMatrix& rho, double theta) {
    WitnessReading r;
    r.theta = theta;
    r.probability = probability_phi(rho, theta);
    r.expectation = 1.0 - 2.0 * r.probability;
    return r;
}

struct OptimalPhase {
    double theta_star = 0.0;
    double p_max = 0.5;
};

/// The arg-max of probability_phi over theta for an X-form state. Closed
/// form: the optimum aligns the probe phase with the coherence z, giving
/// p_max = [1 - 2x + 2|z|]/2. Throws NotXForm when the state is not X-form.
inline OptimalPhase optimal_phase(const DensityMatrix& rho) {
    const XStateParams p = density_to_xstate(rho);
    OptimalPhase out;
    out.theta_star = std::abs(p.z) > 0.0 ? std::arg(p.z) : 0.0;
    out.p_max = 0.5 * (1.0 - 2.0 * p.x + 2.0 * std::abs(p.z));
    return out;
}

} // namespace esd
