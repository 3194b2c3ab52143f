#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "esd/complex_matrix.hpp"
#include "esd/eigen.hpp"
#include "esd/errors.hpp"

namespace esd {

// Repository-wide two-qubit basis ordering. Index 0..3 = |11>, |10>, |01>,
// |00>, i.e. the excited state |1> comes first within each qubit. The X-form
// density matrix and every 4x4 operator in this library use this ordering.
inline const std::vector<std::string>& two_qubit_basis_labels() {
    static const std::vector<std::string> labels{"11", "10", "01", "00"};
    return labels;
}

/// |alpha| |00> + |beta| e^{i theta} |11>: the initial pure-state family.
struct InitialState {
    double alpha_mag = 1.0; // amplitude of |00>
    double beta_mag = 0.0;  // amplitude of |11>
    double theta = 0.0;     // relative phase, radians

    InitialState() = default;
    InitialState(double alpha, double beta, double phase)
        : alpha_mag(alpha), beta_mag(beta), theta(phase) {
        if (alpha_mag < 0.0 || beta_mag < 0.0 || !std::isfinite(theta)) {
            throw InvalidNormalization("InitialState: amplitudes must be nonnegative and finite");
        }
        const double norm = alpha_mag * alpha_mag + beta_mag * beta_mag;
        if (std::abs(norm - 1.0) > 1e-12) {
            throw InvalidNormalization("InitialState: |alpha|^2 + |beta|^2 != 1");
        }
    }
};

/// The four parameters of the X-form density matrix
///   [[w, 0, 0, z], [0, x, 0, 0], [0, 0, x, 0], [z*, 0, 0, y]]
/// in the basis (|11>, |10>, |01>, |00>). w is the |11> population, x the
/// shared population of |10> and |01>, y the |00> population, and z the
/// <11|rho|00> coherence.
struct XStateParams {
    double w = 0.0;
    double x = 0.0;
    double y = 1.0;
    Complex z{0.0, 0.0};

    static constexpr double kNormTol = 1e-10;
    static constexpr double kPositivityTol = 1e-10;

    void validate() const {
        if (!std::isfinite(w) || !std::isfinite(x) || !std::isfinite(y) ||
            !std::isfinite(z.real()) || !std::isfinite(z.imag())) {
            throw InvalidParams("XStateParams: non-finite parameter");
        }
        if (w < -1e-12 || x < -1e-12 || y < -1e-12) {
            throw InvalidParams("XStateParams: negative population");
        }
        if (std::abs(w + 2.0 * x + y - 1.0) > kNormTol) {
            throw InvalidParams("XStateParams: w + 2x + y != 1");
        }
        if (std::norm(z) > w * y + kPositivityTol) {
            throw InvalidParams("XStateParams: |z|^2 > w*y (coherence block not positive)");
        }
    }
};

/// Trace-one, Hermitian, positive-semidefinite matrix over a labeled
/// tensor-product space. Invariants are checked on construction.
class DensityMatrix {
public:
    static constexpr double kHermitianTol = 1e-10;
    static constexpr double kTraceTol = 1e-10;
    static constexpr double kMinEigTol = -1e-9;

    DensityMatrix(ComplexMatrix m, std::vector<std::string> basis_labels)
        : m_(std::move(m)), basis_(std::move(basis_labels)) {
        if (!m_.square()) throw InvalidDensityMatrix("DensityMatrix: matrix not square");
        if (basis_.size() != m_.rows()) {
            throw InvalidDensityMatrix("DensityMatrix: basis label count != dimension");
        }
        if (!is_hermitian(m_, kHermitianTol)) {
            throw InvalidDensityMatrix("DensityMatrix: not Hermitian within 1e-10");
        }
        if (std::abs(trace(m_) - Complex{1.0, 0.0}) > kTraceTol) {
            throw InvalidDensityMatrix("DensityMatrix: trace != 1 within 1e-10");
        }
        if (min_eigenvalue_hermitian(m_, kHermitianTol) < kMinEigTol) {
            throw InvalidDensityMatrix("DensityMatrix: minimum eigenvalue below -1e-9");
        }
    }

    const ComplexMatrix& matrix() const { return m_; }
    const std::vector<std::string>& basis_labels() const { return basis_; }
    std::size_t dim() const { return m_.rows(); }

    double purity() const { return trace(m_ * m_).real(); }

private:
    ComplexMatrix m_;
    std::vector<std::string> basis_;
};

/// Projector onto |Phi(theta)> = (|00> + e^{i theta} |11>)/sqrt(2).
inline DensityMatrix bell_phi(double theta) {
    const Complex a11 = std::exp(Complex{0.0, theta}) / std::sqrt(2.0);
    const Complex a00 = 1.0 / std::sqrt(2.0);
    ComplexMatrix m(4, 4);
    m(0, 0) = a11 * std::conj(a11);
    m(0, 3) = a11 * std::conj(a00);
    m(3, 0) = a00 * std::conj(a11);
    m(3, 3) = a00 * std::conj(a00);
    return DensityMatrix(std::move(m), two_qubit_basis_labels());
}

/// Rank-1 projector onto |alpha||00> + |beta| e^{i theta}|11>. The coherence
/// convention is z(0) = <11|rho|00> = |alpha||beta| e^{i theta}, which makes
/// probability_phi(rho, theta) maximal at the preparation phase, so that
/// P(0) = (1 + C(0))/2 exactly.
inline DensityMatrix initial_state_density(const InitialState& s) {
    const Complex a11 = s.beta_mag * std::exp(Complex{0.0, s.theta});
    const Complex a00 = s.alpha_mag;
    ComplexMatrix m(4, 4);
    m(0, 0) = a11 * std::conj(a11);
    m(0, 3) = a11 * std::conj(a00);
    m(3, 0) = a00 * std::conj(a11);
    m(3, 3) = a00 * std::conj(a00);
    return DensityMatrix(std::move(m), two_qubit_basis_labels());
}

inline XStateParams initial_state_xparams(const InitialState& s) {
    XStateParams p;
    p.w = s.beta_mag * s.beta_mag;
    p.x = 0.0;
    p.y = s.alpha_mag * s.alpha_mag;
    p.z = s.alpha_mag * s.beta_mag * std::exp(Complex{0.0, s.theta});
    p.validate();
    return p;
}

/// The X-form matrix of the (w, x, y, z) parameters.
inline DensityMatrix xstate_to_density(const XStateParams& p) {
    p.validate();
    ComplexMatrix m(4, 4);
    m(0, 0) = std::max(p.w, 0.0);
    m(1, 1) = std::max(p.x, 0.0);
    m(2, 2) = std::max(p.x, 0.0);
    m(3, 3) = std::max(p.y, 0.0);
    m(0, 3) = p.z;
    m(3, 0) = std::conj(p.z);
    return DensityMatrix(std::move(m), two_qubit_basis_labels());
}

/// Extracts (w, x, y, z) and verifies the matrix actually has the X form:
/// every entry outside the pattern must have magnitude <= tol and the two
/// middle populations must agree to tol. Throws NotXForm otherwise -- the
/// signal that the state left the protected family (e.g. under asymmetric
/// noise).
inline XStateParams density_to_xstate(const DensityMatrix& d, double tol = 1e-9) {
    if (d.dim() != 4) throw DimensionMismatch("density_to_xstate: matrix must be 4x4");
    const ComplexMatrix& m = d.matrix();
    static constexpr std::array<std::array<int, 2>, 6> pattern{
        {{0, 0}, {1, 1}, {2, 2}, {3, 3}, {0, 3}, {3, 0}}};
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            bool in_pattern = false;
            for (const auto& pq : pattern) {
                if (pq[0] == i && pq[1] == j) in_pattern = true;
            }
            if (!in_pattern && std::abs(m(i, j)) > tol) {
                throw NotXForm("density_to_xstate: entry outside the X pattern");
            }
        }
    }
    if (std::abs(m(1, 1) - m(2, 2)) > tol) {
        throw NotXForm("density_to_xstate: |10> and |01> populations differ");
    }
    XStateParams p;
    p.w = m(0, 0).real();
    p.x = 0.5 * (m(1, 1).real() + m(2, 2).real());
    p.y = m(3, 3).real();
    p.z = m(0, 3);
    p.validate();
    return p;
}

/// A separable two-qubit state: convex mixture of 2 to 4 Kronecker products
/// of random single-qubit density matrices, deterministic in the seed.
inline DensityMatrix random_product_state(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> term_count(2, 4);
    std::exponential_distribution<double> expo(1.0);
    std::normal_distribution<double> gauss(0.0, 1.0);

    auto random_qubit_state = [&]() {
        ComplexMatrix g(2, 2);
        for (std::size_t i = 0; i < 2; ++i) {
            for (std::size_t j = 0; j < 2; ++j) {
                g(i, j) = Complex{gauss(rng), gauss(rng)};
            }
        }
        ComplexMatrix rho = g * dagger(g);
        const double tr = trace(rho).real();
        return rho * Complex{1.0 / tr, 0.0};
    };

    const int terms = term_count(rng);
    std::vector<double> weights(static_cast<std::size_t>(terms));
    double total = 0.0;
    for (double& wgt : weights) {
        wgt = expo(rng);
        total += wgt;
    }

    ComplexMatrix m(4, 4);
    for (double wgt : weights) {
        const ComplexMatrix a = random_qubit_state();
        const ComplexMatrix b = random_qubit_state();
        m += kron(a, b) * Complex{wgt / total, 0.0};
    }
    return DensityMatrix(std::move(m), two_qubit_basis_labels());
}

} // namespace esd
