#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <ostream>
#include <random>
#include <vector>

#include "esd/dynamics.hpp"
#include "esd/entanglement.hpp"
#include "esd/io.hpp"
#include "esd/protocols.hpp"
#include "esd/states.hpp"

namespace esd {

/// Valid X-state parameters drawn uniformly-ish over the family:
/// (w, 2x, y) Dirichlet weights, |z| a uniform fraction of the sqrt(w y)
/// positivity bound, phase uniform. Deterministic in the seed.
inline XStateParams random_xstate(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::exponential_distribution<double> expo(1.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double a = expo(rng), b = expo(rng), c = expo(rng);
    const double total = a + b + c;
    XStateParams p;
    p.w = a / total;
    p.x = 0.5 * b / total;
    p.y = c / total;
    const double zmag = unit(rng) * std::sqrt(p.w * p.y);
    const double phase = unit(rng) * 2.0 * M_PI;
    p.z = zmag * std::exp(Complex{0.0, phase});
    p.validate();
    return p;
}

namespace selftest {

struct SuiteResult {
    std::string name;
    bool pass = false;
    double worst = 0.0; // suite-specific worst-case deviation
};

inline SuiteResult analytic_vs_integrator() {
    SuiteResult r{"analytic-vs-integrator"};
    const double gamma = 1.0;
    const double alphas2[] = {0.0, 0.25, 0.5, 2.0 / 3.0, 1.0};
    double worst = 0.0;
    for (double a2 : alphas2) {
        const InitialState s{std::sqrt(a2), std::sqrt(1.0 - a2), 0.4};
        const XStateParams p0 = initial_state_xparams(s);
        const EvolutionResult ev =
            integrate(initial_state_density(s), amplitude_damping_reservoir(gamma), 5.0, 1e-3);
        for (std::size_t k = 0; k < ev.times.size(); k += 25) {
            const XStateParams ref = evolve_analytic(p0, gamma, ev.times[k]);
            const XStateParams got = density_to_xstate(ev.states[k]);
            worst = std::max(worst, std::abs(got.w - ref.w));
            worst = std::max(worst, std::abs(got.x - ref.x));
            worst = std::max(worst, std::abs(got.y - ref.y));
            worst = std::max(worst, std::abs(got.z - ref.z));
        }
    }
    r.worst = worst;
    r.pass = worst <= 1e-8;
    return r;
}

inline SuiteResult wootters_vs_closed_form() {
    SuiteResult r{"wootters-vs-closed-form"};
    double worst = 0.0;
    for (std::uint64_t seed = 1; seed <= 1000; ++seed) {
        const XStateParams p = random_xstate(seed);
        const double general = concurrence(xstate_to_density(p));
        const double closed = concurrence_xstate(p);
        worst = std::max(worst, std::abs(general - closed));
    }
    r.worst = worst;
    r.pass = worst <= 1e-9;
    return r;
}

inline SuiteResult protocol_vs_closed_form(std::optional<double> eta_override = std::nullopt) {
    SuiteResult r{"protocol"};
    const double eta_ref = eta_override.value_or(eta());
    double worst = 0.0;
    for (int si = 0; si < 7; ++si) {
        const double a2 = 0.05 + 0.15 * si;
        const double theta = -1.2 + 0.4 * si;
        const InitialState s{std::sqrt(a2), std::sqrt(1.0 - a2), theta};
        const XStateParams p0 = initial_state_xparams(s);
        for (int ti = 0; ti < 9; ++ti) {
            const double tau = 0.25 * ti;
            const XStateParams p = evolve_analytic(p0, 1.0, tau);
            for (int di = 0; di < 8; ++di) {
                const double delta = di * M_PI / 4.0;
                const double ref = protocol_probability_closed_form(p.x, std::abs(p.z), theta,
                                                                    delta, eta_ref);
                const ProtocolOutcome ion = ion_protocol(p, theta, delta);
                const ProtocolOutcome cav = cavity_measure(p, theta, delta);
                worst = std::max(worst, std::abs(ion.probability - ref));
                worst = std::max(worst, std::abs(cav.probability - ref));
            }
        }
    }
    r.worst = worst;
    r.pass = worst <= 1e-10;
    return r;
}

inline SuiteResult witness_positivity() {
    SuiteResult r{"witness-positivity"};
    double most_negative = 0.0;
    for (std::uint64_t seed = 1; seed <= 1000; ++seed) {
        const DensityMatrix rho = random_product_state(seed);
        for (int k = 0; k < 32; ++k) {
            const double theta = k * 2.0 * M_PI / 32.0;
            const double w = witness_reading(rho, theta).expectation;
            most_negative = std::min(most_negative, w);
        }
    }
    r.worst = -most_negative;
    r.pass = most_negative >= -1e-9;
    return r;
}

} // namespace selftest

/// Run the full oracle suite and report one line per suite. Returns true iff
/// all suites pass. The eta override deliberately corrupts the closed-form
/// constant the protocol suite compares against (test hook).
inline bool run_selftest(std::ostream& out, std::optional<double> eta_override = std::nullopt) {
    const selftest::SuiteResult results[] = {
        selftest::analytic_vs_integrator(),
        selftest::wootters_vs_closed_form(),
        selftest::protocol_vs_closed_form(eta_override),
        selftest::witness_positivity(),
    };
    bool all = true;
    for (const auto& r : results) {
        out << (r.pass ? "[PASS] " : "[FAIL] ") << r.name
            << " (worst deviation " << format_number(r.worst, 6) << ")\n";
        all = all && r.pass;
    }
    return all;
}

} // namespace esd
