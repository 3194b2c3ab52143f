#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <random>

#include "esd/dynamics.hpp"
#include "esd/entanglement.hpp"
#include "esd/selftest.hpp"

using esd::Complex;
using esd::ComplexMatrix;
using esd::DensityMatrix;
using esd::InitialState;
using esd::XStateParams;

namespace {

void check_close(const XStateParams& a, const XStateParams& b, double tol) {
    CHECK(std::abs(a.w - b.w) <= tol);
    CHECK(std::abs(a.x - b.x) <= tol);
    CHECK(std::abs(a.y - b.y) <= tol);
    CHECK(std::abs(a.z - b.z) <= tol);
}

} // namespace

TEST_CASE("evolve_analytic matches the printed solution") {
    const XStateParams bell{0.5, 0.0, 0.5, Complex{0.5, 0.0}};

    check_close(esd::evolve_analytic(bell, 1.0, 0.0), bell, 0.0);

    // gamma t = ln 2, i.e. survival factor 1/2
    const XStateParams half = esd::evolve_analytic(bell, 1.0, std::log(2.0));
    check_close(half, {0.125, 0.125, 0.625, Complex{0.25, 0.0}}, 1e-15);

    const XStateParams late = esd::evolve_analytic(bell, 1.0, 50.0);
    CHECK(late.w < 1e-15);
    CHECK(late.x < 1e-15);
    CHECK(std::abs(late.y - 1.0) < 1e-15);
    CHECK(std::abs(late.z) < 1e-15);

    CHECK_THROWS_AS(esd::evolve_analytic(bell, 0.0, 1.0), esd::InvalidParams);
    CHECK_THROWS_AS(esd::evolve_analytic(bell, 1.0, -1.0), esd::InvalidParams);
}

TEST_CASE("analytic solution keeps the normalization identity exactly") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int rep = 0; rep < 100; ++rep) {
        const XStateParams p0 = esd::random_xstate(rep + 1);
        const double t = 5.0 * unit(rng);
        const XStateParams p = esd::evolve_analytic(p0, 1.0, t);
        CHECK(std::abs(p.w + 2.0 * p.x + p.y - 1.0) < 1e-15);
    }
}

TEST_CASE("analytic map is a semigroup, including x(0) > 0") {
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int rep = 0; rep < 100; ++rep) {
        const XStateParams p0 = esd::random_xstate(rep + 1000);
        const double t1 = 3.0 * unit(rng);
        const double t2 = 3.0 * unit(rng);
        const XStateParams direct = esd::evolve_analytic(p0, 1.0, t1 + t2);
        const XStateParams composed =
            esd::evolve_analytic(esd::evolve_analytic(p0, 1.0, t1), 1.0, t2);
        check_close(direct, composed, 1e-12);
    }
}

TEST_CASE("lindblad_rhs") {
    const esd::ReservoirSpec res = esd::amplitude_damping_reservoir(1.0);

    const DensityMatrix vac = esd::initial_state_density({1.0, 0.0, 0.0});
    CHECK(esd::lindblad_rhs(vac, res).max_abs() < 1e-15);

    // |11><11| loses population at 2 gamma
    ComplexMatrix excited(4, 4);
    excited(0, 0) = 1.0;
    const ComplexMatrix rhs =
        esd::lindblad_rhs(DensityMatrix(excited, esd::two_qubit_basis_labels()), res);
    CHECK(std::abs(rhs(0, 0) - Complex{-2.0, 0.0}) < 1e-15);

    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const DensityMatrix rho = esd::random_product_state(seed);
        CHECK(std::abs(esd::trace(esd::lindblad_rhs(rho, res))) < 1e-12);
    }

    esd::ReservoirSpec bad;
    bad.jumps.push_back({ComplexMatrix::identity(2), 1.0});
    CHECK_THROWS_AS(esd::lindblad_rhs(vac, bad), esd::DimensionMismatch);
    esd::ReservoirSpec negative;
    negative.jumps.push_back({ComplexMatrix::identity(4), -1.0});
    CHECK_THROWS_AS(esd::lindblad_rhs(vac, negative), esd::InvalidParams);
}

TEST_CASE("integrate with zero rates is the identity") {
    esd::ReservoirSpec res = esd::amplitude_damping_reservoir(1.0);
    for (auto& j : res.jumps) j.rate = 0.0;
    const DensityMatrix rho0 = esd::initial_state_density({0.6, 0.8, 0.4});
    const esd::EvolutionResult ev = esd::integrate(rho0, res, 0.05, 1e-2);
    REQUIRE(ev.times.size() == 6);
    for (const DensityMatrix& s : ev.states) {
        CHECK(esd::max_abs_diff(s.matrix(), rho0.matrix()) == 0.0);
    }
    for (std::size_t k = 1; k < ev.times.size(); ++k) CHECK(ev.times[k] > ev.times[k - 1]);
}

TEST_CASE("integrator matches the analytic solution") {
    const double gamma = 1.0;
    const InitialState s{1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0), 0.0};
    const XStateParams p0 = esd::initial_state_xparams(s);
    const esd::EvolutionResult ev = esd::integrate(esd::initial_state_density(s),
                                                   esd::amplitude_damping_reservoir(gamma), 5.0,
                                                   1e-3 / gamma);
    double worst = 0.0;
    for (std::size_t k = 0; k < ev.times.size(); k += 100) {
        const XStateParams ref = esd::evolve_analytic(p0, gamma, ev.times[k]);
        const XStateParams got = esd::density_to_xstate(ev.states[k]);
        worst = std::max({worst, std::abs(got.w - ref.w), std::abs(got.x - ref.x),
                          std::abs(got.y - ref.y), std::abs(got.z - ref.z)});
    }
    CHECK(worst < 1e-8);
}

TEST_CASE("analytic x(0) > 0 extension agrees with the integrator") {
    const XStateParams p0{0.3, 0.1, 0.5, Complex{0.05, 0.12}};
    const esd::EvolutionResult ev = esd::integrate(esd::xstate_to_density(p0),
                                                   esd::amplitude_damping_reservoir(1.0), 2.0,
                                                   1e-3);
    for (std::size_t k = 0; k < ev.times.size(); k += 200) {
        check_close(esd::density_to_xstate(ev.states[k]),
                    esd::evolve_analytic(p0, 1.0, ev.times[k]), 1e-8);
    }
}

TEST_CASE("diffusive reservoir preserves trace and X form") {
    const InitialState s{0.6, 0.8, 0.3};
    const esd::EvolutionResult ev =
        esd::integrate(esd::initial_state_density(s), esd::diffusive_reservoir(1.0), 5.0, 1e-3);
    for (std::size_t k = 0; k < ev.times.size(); k += 250) {
        CHECK(std::abs(esd::trace(ev.states[k].matrix()) - Complex{1.0, 0.0}) < 1e-10);
        CHECK_NOTHROW(esd::density_to_xstate(ev.states[k]));
    }
}

TEST_CASE("too coarse a step raises StepTooLarge") {
    const DensityMatrix rho0 = esd::initial_state_density({0.0, 1.0, 0.0});
    CHECK_THROWS_AS(esd::integrate(rho0, esd::amplitude_damping_reservoir(1.0), 10.0, 2.5),
                    esd::StepTooLarge);
}

TEST_CASE("disentanglement_time") {
    const double r = 1.0 / std::sqrt(2.0);
    CHECK_FALSE(esd::disentanglement_time({r, r, 0.0}, 1.0).has_value());

    const InitialState finite{std::sqrt(1.0 / 3.0), std::sqrt(2.0 / 3.0), 0.0};
    const auto ts = esd::disentanglement_time(finite, 1.0);
    REQUIRE(ts.has_value());
    CHECK(std::abs(*ts - 1.22794717729951568) < 1e-12);
    const auto oracle = esd::disentanglement_time_bisection(finite, 1.0);
    REQUIRE(oracle.has_value());
    CHECK(std::abs(*ts - *oracle) < 1e-9);

    // gamma scaling
    const auto ts2 = esd::disentanglement_time(finite, 2.5);
    CHECK(std::abs(*ts2 - *ts / 2.5) < 1e-12);

    const InitialState asym{std::sqrt(2.0 / 3.0), std::sqrt(1.0 / 3.0), 0.0};
    CHECK_FALSE(esd::disentanglement_time(asym, 1.0).has_value());
    CHECK_FALSE(esd::disentanglement_time_bisection(asym, 1.0).has_value());
    const XStateParams p0 = esd::initial_state_xparams(asym);
    for (int k = 0; k <= 100; ++k) {
        const XStateParams p = esd::evolve_analytic(p0, 1.0, 0.5 * k);
        CHECK(esd::concurrence_xstate(p) > 0.0);
    }

    CHECK_THROWS_AS(esd::disentanglement_time({1.0, 0.0, 0.0}, 1.0),
                    esd::NotEntangledInitially);
    CHECK_THROWS_AS(esd::disentanglement_time({0.0, 1.0, 0.0}, 1.0),
                    esd::NotEntangledInitially);
    CHECK_THROWS_AS(esd::disentanglement_time({0.5, std::sqrt(0.75), 0.0}, 0.0),
                    esd::InvalidParams);
}

TEST_CASE("perturbed evolution reduces to the symmetric case for equal rates") {
    const InitialState s{1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0), 0.0};
    const double t = std::log(2.0);
    const DensityMatrix rho = esd::perturbed_evolution(s, 1.0, 1.0, t);
    const XStateParams ref = esd::evolve_analytic(esd::initial_state_xparams(s), 1.0, t);
    check_close(esd::density_to_xstate(rho), ref, 1e-8);
}

TEST_CASE("unequal rates leave the symmetric X family") {
    const InitialState s{1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0), 0.0};
    const DensityMatrix rho = esd::perturbed_evolution(s, 1.0, 1.3, 1.0);
    CHECK_THROWS_AS(esd::density_to_xstate(rho), esd::NotXForm);
    // but the middle coherences stay zero: only the populations split
    CHECK(std::abs(rho.matrix()(1, 2)) < 1e-12);
    CHECK(std::abs(rho.matrix()(1, 1) - rho.matrix()(2, 2)) > 1e-4);
}
