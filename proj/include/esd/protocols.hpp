#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "esd/complex_matrix.hpp"
#include "esd/errors.hpp"
#include "esd/states.hpp"

namespace esd {

/// eta = sin^2(pi sqrt(2)/4): the leakage factor of the sqrt(2)-detuned
/// sideband transition, shared by both read-out protocols.
inline double eta() {
    static const double value = [] {
        const double s = std::sin(M_PI * std::sqrt(2.0) / 4.0);
        return s * s;
    }();
    return value;
}

/// P(delta, t) = 1/2 - |z| cos(theta - delta) - eta x: the closed form both
/// protocol simulations must reproduce.
inline double protocol_probability_closed_form(double x, double z_mag, double theta, double delta,
                                               double eta_value) {
    return 0.5 - z_mag * std::cos(theta - delta) - eta_value * x;
}

inline double protocol_probability_closed_form(const XStateParams& p, double theta, double delta) {
    return protocol_probability_closed_form(p.x, std::abs(p.z), theta, delta, eta());
}

/// Probabilities produced by a simulated measurement protocol (P_gg for the
/// ion read-out, P_e for the cavity one), with the control phase delta and
/// the eta constant used.
struct ProtocolOutcome {
    double delta = 0.0;
    double probability = 0.0;
    double eta = 0.0;
};

namespace detail {

/// Embed a two-factor operator into a three-factor space. `op` acts on the
/// ordered pair (fa, fb) of factors (fa != fb, both < 3) with the pair index
/// running a-major: pair = ia * dims[fb] + ib.
inline ComplexMatrix embed_pair(const ComplexMatrix& op, const std::array<std::size_t, 3>& dims,
                                std::size_t fa, std::size_t fb) {
    const std::size_t n = dims[0] * dims[1] * dims[2];
    if (op.rows() != dims[fa] * dims[fb] || !op.square()) {
        throw DimensionMismatch("embed_pair: operator dimension mismatch");
    }
    auto decode = [&dims](std::size_t idx) {
        std::array<std::size_t, 3> f{};
        f[2] = idx % dims[2];
        idx /= dims[2];
        f[1] = idx % dims[1];
        f[0] = idx / dims[1];
        return f;
    };
    std::size_t spectator = 3 - fa - fb;
    ComplexMatrix full(n, n);
    for (std::size_t r = 0; r < n; ++r) {
        const auto fr = decode(r);
        for (std::size_t c = 0; c < n; ++c) {
            const auto fc = decode(c);
            if (fr[spectator] != fc[spectator]) continue;
            const std::size_t pr = fr[fa] * dims[fb] + fr[fb];
            const std::size_t pc = fc[fa] * dims[fb] + fc[fb];
            full(r, c) = op(pr, pc);
        }
    }
    return full;
}

inline void require_unitary(const ComplexMatrix& u, const char* what) {
    if (!is_unitary(u, 1e-12)) {
        throw NonUnitaryCompletion(std::string(what) + ": completion is not unitary");
    }
}

inline std::vector<std::string> three_factor_labels(const std::array<std::size_t, 3>& dims,
                                                    const std::array<std::string, 2>& two_level) {
    std::vector<std::string> labels;
    labels.reserve(dims[0] * dims[1] * dims[2]);
    for (std::size_t a = 0; a < dims[0]; ++a) {
        for (std::size_t b = 0; b < dims[1]; ++b) {
            for (std::size_t c = 0; c < dims[2]; ++c) {
                std::string l;
                l += dims[0] == 2 ? two_level[a] : std::to_string(a);
                l += dims[1] == 2 ? two_level[b] : std::to_string(b);
                l += std::to_string(c);
                labels.push_back(l);
            }
        }
    }
    return labels;
}

/// rho4 with coherence magnitude from p and phase from theta. Within the
/// protocols the preparation phase is always passed explicitly, so the
/// coherence is rebuilt as |z| e^{i theta}.
inline ComplexMatrix xstate_matrix_with_phase(const XStateParams& p, double theta) {
    XStateParams q = p;
    q.z = std::abs(p.z) * std::exp(Complex{0.0, theta});
    return xstate_to_density(q).matrix();
}

} // namespace detail

// ---------------------------------------------------------------------------
// Trapped-ion read-out: ion 1 internal (e,g) x ion 2 internal (e,g) x shared
// vibrational mode (Fock 0,1,2). Truncation at n = 2 is exact: the blue
// sideband reaches level 2 from |g,1> and nothing reaches level 3.
// ---------------------------------------------------------------------------

inline const std::array<std::size_t, 3>& ion_dims() {
    static const std::array<std::size_t, 3> d{2, 2, 3};
    return d;
}

inline const std::vector<std::string>& ion_basis_labels() {
    static const std::vector<std::string> labels =
        detail::three_factor_labels(ion_dims(), {"e", "g"});
    return labels;
}

struct IonRegister {
    DensityMatrix state;

    explicit IonRegister(DensityMatrix s) : state(std::move(s)) {
        if (state.dim() != 12) throw DimensionMismatch("IonRegister: dimension must be 12");
    }

    /// rho(t) (x) |0><0|_vib, with the coherence phase supplied by theta.
    static IonRegister from_xstate(const XStateParams& p, double theta) {
        ComplexMatrix vac(3, 3);
        vac(0, 0) = 1.0;
        return IonRegister(DensityMatrix(kron(detail::xstate_matrix_with_phase(p, theta), vac),
                                         ion_basis_labels()));
    }

    double vibrational_population(std::size_t level) const {
        double pop = 0.0;
        for (std::size_t i1 = 0; i1 < 2; ++i1) {
            for (std::size_t i2 = 0; i2 < 2; ++i2) {
                const std::size_t idx = (i1 * 2 + i2) * 3 + level;
                pop += state.matrix()(idx, idx).real();
            }
        }
        return pop;
    }

    /// Probability that both ions are measured in |g> (trace over vibration).
    double probability_both_ground() const {
        double pgg = 0.0;
        for (std::size_t n = 0; n < 3; ++n) {
            const std::size_t idx = (1 * 2 + 1) * 3 + n;
            pgg += state.matrix()(idx, idx).real();
        }
        return pgg;
    }
};

/// Completion choices for the red-sideband pulse on the basis states the
/// stated map leaves open. Both must produce identical outcomes; the tests
/// assert that.
enum class RedCompletion {
    identity,       // identity on |e,1>, |g,2> (and the dark |g,0>, |e,2>)
    sqrt2_rotation, // physical sqrt(2)-Rabi rotation on the {|e,1>, |g,2>} pair
};

/// Completion choices for the blue-sideband pulse on |e,0> and |g,2>.
enum class BlueCompletion {
    identity,
    phased, // extra phases on the dark |e,0> and the unpopulated |g,2>
};

namespace detail {

// 2 (x) 3 single-ion (x) vibration space; index = level*3 + n with level 0 = e.
constexpr std::size_t kE0 = 0, kE1 = 1, kE2 = 2, kG0 = 3, kG1 = 4, kG2 = 5;

inline ComplexMatrix red_sideband_unitary(RedCompletion completion) {
    ComplexMatrix u = ComplexMatrix::identity(6);
    // |g,1> -> |e,0>, |e,0> -> -|g,1>
    u(kG1, kG1) = 0.0;
    u(kE0, kE0) = 0.0;
    u(kE0, kG1) = 1.0;
    u(kG1, kE0) = -1.0;
    if (completion == RedCompletion::sqrt2_rotation) {
        const double half = M_PI * std::sqrt(2.0) / 2.0;
        const double c = std::cos(half), s = std::sin(half);
        u(kE1, kE1) = c;
        u(kG2, kE1) = -s;
        u(kE1, kG2) = s;
        u(kG2, kG2) = c;
    }
    require_unitary(u, "red_sideband");
    return u;
}

inline ComplexMatrix blue_sideband_unitary(double delta, BlueCompletion completion) {
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    const double c = std::cos(M_PI * std::sqrt(2.0) / 4.0);
    const double s = std::sin(M_PI * std::sqrt(2.0) / 4.0);
    const Complex eid = std::exp(Complex{0.0, delta});

    ComplexMatrix u = ComplexMatrix::identity(6);
    // |g,0> -> (|g,0> - e^{i delta}|e,1>)/sqrt(2)
    u(kG0, kG0) = inv_sqrt2;
    u(kE1, kG0) = -eid * inv_sqrt2;
    // |e,1> -> (e^{-i delta}|g,0> + |e,1>)/sqrt(2)
    // (conjugate phase; the two lines are a unitary pair only this way)
    u(kE1, kE1) = inv_sqrt2;
    u(kG0, kE1) = std::conj(eid) * inv_sqrt2;
    // |g,1> -> cos(pi sqrt2/4)|g,1> - sin(pi sqrt2/4) e^{-i delta}|e,2>
    u(kG1, kG1) = c;
    u(kE2, kG1) = -s * std::conj(eid);
    // |e,2> -> sin(pi sqrt2/4) e^{i delta}|g,1> + cos(pi sqrt2/4)|e,2>
    u(kE2, kE2) = c;
    u(kG1, kE2) = s * eid;
    if (completion == BlueCompletion::phased) {
        u(kE0, kE0) = std::exp(Complex{0.0, 0.7});
        u(kG2, kG2) = std::exp(Complex{0.0, -1.3});
    }
    require_unitary(u, "blue_sideband");
    return u;
}

inline DensityMatrix conjugate_state(const DensityMatrix& rho, const ComplexMatrix& u) {
    return DensityMatrix(u * rho.matrix() * dagger(u), rho.basis_labels());
}

} // namespace detail

/// Red-sideband pi pulse on ion 1: |g,1> -> |e,0>, |e,0> -> -|g,1> on the
/// ion-1 (x) vibration pair, identity elsewhere.
inline IonRegister red_sideband_pi(const IonRegister& reg,
                                   RedCompletion completion = RedCompletion::identity) {
    const ComplexMatrix u =
        detail::embed_pair(detail::red_sideband_unitary(completion), ion_dims(), 0, 2);
    return IonRegister(detail::conjugate_state(reg.state, u));
}

/// Blue-sideband half pulse on ion 2 with control phase delta.
inline IonRegister blue_sideband_half(const IonRegister& reg, double delta,
                                      BlueCompletion completion = BlueCompletion::identity) {
    const ComplexMatrix u =
        detail::embed_pair(detail::blue_sideband_unitary(delta, completion), ion_dims(), 1, 2);
    return IonRegister(detail::conjugate_state(reg.state, u));
}

/// Pulse described as data; target 1 is ion 1, target 2 is ion 2.
struct PulseSpec {
    enum class Kind { red_sideband_pi, blue_sideband_half };
    Kind kind = Kind::red_sideband_pi;
    int target_ion = 1;
    double delta = 0.0;
};

inline IonRegister apply_pulse(const IonRegister& reg, const PulseSpec& pulse) {
    if (!std::isfinite(pulse.delta)) throw InvalidParams("apply_pulse: delta not finite");
    if (pulse.target_ion != 1 && pulse.target_ion != 2) {
        throw InvalidParams("apply_pulse: target ion must be 1 or 2");
    }
    const std::size_t ion_factor = pulse.target_ion == 1 ? 0 : 1;
    const ComplexMatrix u6 = pulse.kind == PulseSpec::Kind::red_sideband_pi
                                 ? detail::red_sideband_unitary(RedCompletion::identity)
                                 : detail::blue_sideband_unitary(pulse.delta,
                                                                 BlueCompletion::identity);
    const ComplexMatrix u = detail::embed_pair(u6, ion_dims(), ion_factor, 2);
    return IonRegister(detail::conjugate_state(reg.state, u));
}

/// Full ion read-out: build rho(t) (x) |0><0| on the 12-dim space, apply the
/// red-sideband pi pulse on ion 1 then the blue-sideband half pulse on ion 2,
/// and project both ions onto |g>. Matches the closed form
/// P_gg = 1/2 - |z| cos(theta - delta) - eta x.
inline ProtocolOutcome ion_protocol(const XStateParams& p, double theta, double delta,
                                    double detection_efficiency = 1.0,
                                    RedCompletion red = RedCompletion::identity,
                                    BlueCompletion blue = BlueCompletion::identity) {
    IonRegister reg = IonRegister::from_xstate(p, theta);
    if (reg.vibrational_population(2) > 1e-12) {
        throw InvalidParams("ion_protocol: vibrational level 2 populated before the pulses");
    }
    reg = red_sideband_pi(reg, red);
    if (reg.vibrational_population(2) > 1e-12) {
        throw InvalidParams("ion_protocol: vibrational level 2 populated before the blue sideband");
    }
    reg = blue_sideband_half(reg, delta, blue);

    ProtocolOutcome out;
    out.delta = delta;
    out.probability = detection_efficiency * reg.probability_both_ground();
    out.eta = eta();
    if (out.probability < -1e-10 || out.probability > 1.0 + 1e-10) {
        throw Error("ion_protocol: probability outside [0,1]");
    }
    return out;
}

/// delta = theta + arccos(-eta), the phase at which cos(theta - delta) = -eta
/// and hence 2 P_gg - 1 = eta (2P - 1).
inline double choose_delta(double theta) { return theta + std::acos(-eta()); }

struct InversionResult {
    double x = 0.0;
    double z_mag = 0.0;
    double theta = 0.0;
};

/// Recover (x, |z|, theta) from three readings at distinct phases by solving
///   P(delta) = 1/2 - cos(delta) a - sin(delta) b - eta x
/// for (a, b, x) = (|z| cos theta, |z| sin theta, x).
inline InversionResult three_phase_inversion(const std::array<ProtocolOutcome, 3>& readings) {
    double m[3][4];
    for (int i = 0; i < 3; ++i) {
        m[i][0] = std::cos(readings[i].delta);
        m[i][1] = std::sin(readings[i].delta);
        m[i][2] = readings[i].eta;
        m[i][3] = 0.5 - readings[i].probability;
    }
    // Gaussian elimination with partial pivoting on the 3x3 system.
    for (int col = 0; col < 3; ++col) {
        int pivot = col;
        for (int r = col + 1; r < 3; ++r) {
            if (std::abs(m[r][col]) > std::abs(m[pivot][col])) pivot = r;
        }
        if (std::abs(m[pivot][col]) < 1e-12) {
            throw SingularSystem("three_phase_inversion: deltas give a rank-deficient system");
        }
        if (pivot != col) {
            for (int c = 0; c < 4; ++c) std::swap(m[pivot][c], m[col][c]);
        }
        for (int r = 0; r < 3; ++r) {
            if (r == col) continue;
            const double f = m[r][col] / m[col][col];
            for (int c = col; c < 4; ++c) m[r][c] -= f * m[col][c];
        }
    }
    const double a = m[0][3] / m[0][0];
    const double b = m[1][3] / m[1][1];
    InversionResult out;
    out.x = m[2][3] / m[2][2];
    out.z_mag = std::hypot(a, b);
    out.theta = std::atan2(b, a);
    return out;
}

// ---------------------------------------------------------------------------
// Cavity-QED read-out: probe atom (e,g) x cavity C_a (Fock 0,1) x cavity C_b
// (Fock 0,1,2). C_b needs the two-photon level: the final half rotation
// drives (e,1) <-> (g,2) at sqrt(2) Rabi, which is exactly where the eta
// factor of the closed form comes from.
// ---------------------------------------------------------------------------

inline const std::array<std::size_t, 3>& cavity_dims() {
    static const std::array<std::size_t, 3> d{2, 2, 3};
    return d;
}

inline const std::vector<std::string>& cavity_basis_labels() {
    static const std::vector<std::string> labels =
        detail::three_factor_labels(cavity_dims(), {"e", "g"});
    return labels;
}

struct CavityRegister {
    DensityMatrix state;

    explicit CavityRegister(DensityMatrix s) : state(std::move(s)) {
        if (state.dim() != 12) throw DimensionMismatch("CavityRegister: dimension must be 12");
    }

    double probability_atom_excited() const {
        double pe = 0.0;
        for (std::size_t na = 0; na < 2; ++na) {
            for (std::size_t nb = 0; nb < 3; ++nb) {
                const std::size_t idx = (0 * 2 + na) * 3 + nb;
                pe += state.matrix()(idx, idx).real();
            }
        }
        return pe;
    }

    /// Partial trace over the atom, mapped to the two-qubit basis
    /// (|11>, |10>, |01>, |00>) with qubit |1> = one photon. Photon levels
    /// above 1 must be unpopulated.
    DensityMatrix two_mode_state() const {
        const ComplexMatrix& full = state.matrix();
        for (std::size_t a = 0; a < 2; ++a) {
            for (std::size_t na = 0; na < 2; ++na) {
                const std::size_t idx = (a * 2 + na) * 3 + 2;
                if (std::abs(full(idx, idx)) > 1e-12) {
                    throw InvalidParams("two_mode_state: C_b level 2 is populated");
                }
            }
        }
        ComplexMatrix m(4, 4);
        for (std::size_t na = 0; na < 2; ++na) {
            for (std::size_t nb = 0; nb < 2; ++nb) {
                for (std::size_t ma = 0; ma < 2; ++ma) {
                    for (std::size_t mb = 0; mb < 2; ++mb) {
                        // qubit index: |1> first, so q = 1 - n
                        const std::size_t r = (1 - na) * 2 + (1 - nb);
                        const std::size_t c = (1 - ma) * 2 + (1 - mb);
                        Complex sum{0.0, 0.0};
                        for (std::size_t a = 0; a < 2; ++a) {
                            sum += full((a * 2 + na) * 3 + nb, (a * 2 + ma) * 3 + mb);
                        }
                        m(r, c) = sum;
                    }
                }
            }
        }
        return DensityMatrix(std::move(m), two_qubit_basis_labels());
    }
};

namespace detail {

// (atom, C_a) pair, index = atom*2 + n_a with atom 0 = e.
constexpr std::size_t kAE0 = 0, kAE1 = 1, kAG0 = 2, kAG1 = 3;

inline ComplexMatrix cavity_a_preparation_unitary(const InitialState& s) {
    const Complex phase = std::exp(Complex{0.0, s.theta});
    ComplexMatrix u = ComplexMatrix::identity(4);
    // |e,0> -> alpha |e,0> - beta e^{i theta} |g,1>
    u(kAE0, kAE0) = s.alpha_mag;
    u(kAG1, kAE0) = -s.beta_mag * phase;
    // unitary completion of the pair
    u(kAE0, kAG1) = s.beta_mag * std::conj(phase);
    u(kAG1, kAG1) = s.alpha_mag;
    require_unitary(u, "cavity_a_preparation");
    return u;
}

inline ComplexMatrix cavity_a_probe_unitary() {
    ComplexMatrix u = ComplexMatrix::identity(4);
    // Rabi pi rotation when C_a holds one photon: |g,1> -> |e,0>, |e,0> -> -|g,1>
    u(kAG1, kAG1) = 0.0;
    u(kAE0, kAE0) = 0.0;
    u(kAE0, kAG1) = 1.0;
    u(kAG1, kAE0) = -1.0;
    require_unitary(u, "cavity_a_probe");
    return u;
}

inline ComplexMatrix atom_pi_rotation_prepare() {
    // |e> -> |g>, |g> -> -|e>
    ComplexMatrix u(2, 2);
    u(1, 0) = 1.0;
    u(0, 1) = -1.0;
    return u;
}

inline ComplexMatrix atom_pi_rotation_probe(double delta) {
    // Control phase delta/2: |g> -> e^{i delta/2}|e>, |e> -> -e^{-i delta/2}|g>.
    ComplexMatrix u(2, 2);
    u(1, 0) = -std::exp(Complex{0.0, -delta / 2.0});
    u(0, 1) = std::exp(Complex{0.0, delta / 2.0});
    require_unitary(u, "atom_pi_rotation");
    return u;
}

// (atom, C_b) pair, index = atom*3 + n_b with atom 0 = e.
constexpr std::size_t kBE0 = 0, kBE1 = 1, kBE2 = 2, kBG0 = 3, kBG1 = 4, kBG2 = 5;

inline ComplexMatrix cavity_b_preparation_unitary() {
    ComplexMatrix u = ComplexMatrix::identity(6);
    // pi rotation: |e,0> -> |g,1>, |g,1> -> -|e,0>
    u(kBE0, kBE0) = 0.0;
    u(kBG1, kBG1) = 0.0;
    u(kBG1, kBE0) = 1.0;
    u(kBE0, kBG1) = -1.0;
    require_unitary(u, "cavity_b_preparation");
    return u;
}

inline ComplexMatrix cavity_b_probe_unitary() {
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    const double c = std::cos(M_PI * std::sqrt(2.0) / 4.0);
    const double s = std::sin(M_PI * std::sqrt(2.0) / 4.0);
    ComplexMatrix u = ComplexMatrix::identity(6);
    // |g,1> -> (|g,1> + |e,0>)/sqrt(2), |e,0> -> (-|g,1> + |e,0>)/sqrt(2)
    u(kBG1, kBG1) = inv_sqrt2;
    u(kBE0, kBG1) = inv_sqrt2;
    u(kBG1, kBE0) = -inv_sqrt2;
    u(kBE0, kBE0) = inv_sqrt2;
    // the same pulse drives (e,1) <-> (g,2) at sqrt(2) Rabi
    u(kBE1, kBE1) = c;
    u(kBG2, kBE1) = -s;
    u(kBE1, kBG2) = s;
    u(kBG2, kBG2) = c;
    require_unitary(u, "cavity_b_probe");
    return u;
}

} // namespace detail

/// Prepare the entangled two-mode state by sending an excited atom through
/// C_a (partial Rabi rotation), C_aux (atomic pi rotation) and C_b (pi
/// rotation). The atom exits in |g> and the two-mode reduced state equals
/// initial_state_density(s); a residual excited-atom population beyond 1e-10
/// raises PreparationLeak.
inline CavityRegister cavity_prepare(const InitialState& s) {
    const std::size_t n = 12;
    ComplexMatrix rho(n, n);
    rho(0, 0) = 1.0; // |e, 0, 0>

    const ComplexMatrix u1 =
        kron(detail::cavity_a_preparation_unitary(s), ComplexMatrix::identity(3));
    const ComplexMatrix u2 = kron(detail::atom_pi_rotation_prepare(), ComplexMatrix::identity(6));
    const ComplexMatrix u3 =
        detail::embed_pair(detail::cavity_b_preparation_unitary(), cavity_dims(), 0, 2);

    rho = u1 * rho * dagger(u1);
    rho = u2 * rho * dagger(u2);
    rho = u3 * rho * dagger(u3);

    CavityRegister reg{DensityMatrix(std::move(rho), cavity_basis_labels())};
    if (reg.probability_atom_excited() > 1e-10) {
        throw PreparationLeak("cavity_prepare: atom not disentangled at exit");
    }
    const DensityMatrix two_mode = reg.two_mode_state();
    if (max_abs_diff(two_mode.matrix(), initial_state_density(s).matrix()) > 1e-12) {
        throw PreparationLeak("cavity_prepare: two-mode state differs from the target");
    }
    return reg;
}

/// Probe pass: the atom enters in |g>, undergoes the photon-conditioned pi
/// rotation in C_a, the delta/2-phased pi rotation in C_aux and the final
/// half rotation in C_b; returns the probability of finding it excited.
/// Matches the same closed form as the ion protocol.
inline ProtocolOutcome cavity_measure(const XStateParams& p, double theta, double delta,
                                      double detection_efficiency = 1.0) {
    const ComplexMatrix rho4 = detail::xstate_matrix_with_phase(p, theta);
    const std::size_t n = 12;
    ComplexMatrix rho(n, n);
    // atom in |g> (index 1), modes carry rho4; qubit |1> = one photon
    for (std::size_t na = 0; na < 2; ++na) {
        for (std::size_t nb = 0; nb < 2; ++nb) {
            for (std::size_t ma = 0; ma < 2; ++ma) {
                for (std::size_t mb = 0; mb < 2; ++mb) {
                    const std::size_t r4 = (1 - na) * 2 + (1 - nb);
                    const std::size_t c4 = (1 - ma) * 2 + (1 - mb);
                    rho((1 * 2 + na) * 3 + nb, (1 * 2 + ma) * 3 + mb) = rho4(r4, c4);
                }
            }
        }
    }

    const ComplexMatrix u1 = kron(detail::cavity_a_probe_unitary(), ComplexMatrix::identity(3));
    const ComplexMatrix u2 =
        kron(detail::atom_pi_rotation_probe(delta), ComplexMatrix::identity(6));
    const ComplexMatrix u3 = detail::embed_pair(detail::cavity_b_probe_unitary(), cavity_dims(), 0, 2);

    rho = u1 * rho * dagger(u1);
    rho = u2 * rho * dagger(u2);
    rho = u3 * rho * dagger(u3);

    const CavityRegister reg{DensityMatrix(std::move(rho), cavity_basis_labels())};
    ProtocolOutcome out;
    out.delta = delta;
    out.probability = detection_efficiency * reg.probability_atom_excited();
    out.eta = eta();
    if (out.probability < -1e-10 || out.probability > 1.0 + 1e-10) {
        throw Error("cavity_measure: probability outside [0,1]");
    }
    return out;
}

} // namespace esd
