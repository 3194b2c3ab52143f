#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include "esd/entanglement.hpp"
#include "esd/selftest.hpp"
#include "esd/states.hpp"

using esd::Complex;
using esd::ComplexMatrix;
using esd::DensityMatrix;
using esd::InitialState;
using esd::XStateParams;

TEST_CASE("initial_state_density basics") {
    const DensityMatrix ground = esd::initial_state_density({1.0, 0.0, 1.7});
    CHECK(ground.matrix()(3, 3) == Complex{1.0, 0.0});
    CHECK(ground.matrix().max_abs() == 1.0);

    const double r = 1.0 / std::sqrt(2.0);
    const DensityMatrix bell = esd::initial_state_density({r, r, 0.0});
    for (auto [i, j] : {std::pair{0, 0}, {0, 3}, {3, 0}, {3, 3}}) {
        CHECK(std::abs(bell.matrix()(i, j) - Complex{0.5, 0.0}) < 1e-15);
    }

    const DensityMatrix skew = esd::initial_state_density({1.0 / std::sqrt(3.0),
                                                           std::sqrt(2.0 / 3.0), 0.0});
    const XStateParams p = esd::density_to_xstate(skew);
    CHECK(std::abs(p.w - 2.0 / 3.0) < 1e-15);
    CHECK(std::abs(p.y - 1.0 / 3.0) < 1e-15);
    CHECK(std::abs(std::abs(p.z) - std::sqrt(2.0) / 3.0) < 1e-15);
    CHECK(p.x == 0.0);

    CHECK_THROWS_AS(InitialState(0.8, 0.7, 0.0), esd::InvalidNormalization);
}

TEST_CASE("initial states are pure and maximal at the preparation phase") {
    for (int ia = 0; ia <= 6; ++ia) {
        for (int it = 0; it < 5; ++it) {
            const double a2 = ia / 6.0;
            const double theta = -2.0 + it;
            const InitialState s{std::sqrt(a2), std::sqrt(1.0 - a2), theta};
            const DensityMatrix rho = esd::initial_state_density(s);
            CHECK(std::abs(rho.purity() - 1.0) < 1e-10);
            // P at the preparation phase equals (1 + C(0))/2
            const double c0 = 2.0 * s.alpha_mag * s.beta_mag;
            CHECK(std::abs(esd::probability_phi(rho, theta) - (1.0 + c0) / 2.0) < 1e-12);
        }
    }
}

TEST_CASE("bell_phi") {
    const DensityMatrix plus = esd::bell_phi(0.0);
    CHECK(std::abs(plus.matrix()(0, 3) - Complex{0.5, 0.0}) < 1e-15);
    const DensityMatrix minus = esd::bell_phi(M_PI);
    CHECK(std::abs(minus.matrix()(0, 3) - Complex{-0.5, 0.0}) < 1e-15);
    CHECK(std::abs(minus.matrix()(0, 0) - Complex{0.5, 0.0}) < 1e-15);

    const double r = 1.0 / std::sqrt(2.0);
    for (double theta : {0.0, 0.9, -2.4}) {
        CHECK(esd::max_abs_diff(esd::bell_phi(theta).matrix(),
                                esd::initial_state_density({r, r, theta}).matrix()) < 1e-15);
    }
}

TEST_CASE("xstate_to_density") {
    const DensityMatrix vac = esd::xstate_to_density({0.0, 0.0, 1.0, Complex{0.0, 0.0}});
    CHECK(vac.matrix()(3, 3) == Complex{1.0, 0.0});

    const DensityMatrix evolved =
        esd::xstate_to_density({0.125, 0.125, 0.625, Complex{0.25, 0.0}});
    CHECK(std::abs(esd::trace(evolved.matrix()) - Complex{1.0, 0.0}) < 1e-15);

    const DensityMatrix bell = esd::xstate_to_density({0.5, 0.0, 0.5, Complex{0.5, 0.0}});
    CHECK(esd::max_abs_diff(bell.matrix(), esd::bell_phi(0.0).matrix()) < 1e-15);

    XStateParams bad;
    bad.w = 0.5;
    bad.x = 0.0;
    bad.y = 0.2; // w + 2x + y != 1
    CHECK_THROWS_AS(esd::xstate_to_density(bad), esd::InvalidParams);

    XStateParams over;
    over.w = 0.5;
    over.x = 0.0;
    over.y = 0.5;
    over.z = Complex{0.6, 0.0}; // |z|^2 > w y
    CHECK_THROWS_AS(esd::xstate_to_density(over), esd::InvalidParams);
}

TEST_CASE("density_to_xstate round trip and pattern detection") {
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
        const XStateParams p = esd::random_xstate(seed);
        const XStateParams q = esd::density_to_xstate(esd::xstate_to_density(p));
        CHECK(std::abs(p.w - q.w) < 1e-15);
        CHECK(std::abs(p.x - q.x) < 1e-15);
        CHECK(std::abs(p.y - q.y) < 1e-15);
        CHECK(std::abs(p.z - q.z) < 1e-15);
    }

    // |10><10|: populations of |10> and |01> differ
    ComplexMatrix ten(4, 4);
    ten(1, 1) = 1.0;
    CHECK_THROWS_AS(esd::density_to_xstate(DensityMatrix(ten, esd::two_qubit_basis_labels())),
                    esd::NotXForm);

    // a 1e-3 coherence between the middle levels trips a 1e-6 tolerance
    ComplexMatrix mid(4, 4);
    mid(1, 1) = 0.5;
    mid(2, 2) = 0.5;
    mid(1, 2) = 1e-3;
    mid(2, 1) = 1e-3;
    const DensityMatrix rho(mid, esd::two_qubit_basis_labels());
    CHECK_THROWS_AS(esd::density_to_xstate(rho, 1e-6), esd::NotXForm);
    CHECK_NOTHROW(esd::density_to_xstate(rho, 1e-2));
}

TEST_CASE("density matrix invariants are enforced") {
    ComplexMatrix not_hermitian(4, 4);
    not_hermitian(0, 0) = 1.0;
    not_hermitian(0, 1) = 0.1;
    CHECK_THROWS_AS(DensityMatrix(not_hermitian, esd::two_qubit_basis_labels()),
                    esd::InvalidDensityMatrix);

    ComplexMatrix wrong_trace = ComplexMatrix::identity(4);
    CHECK_THROWS_AS(DensityMatrix(wrong_trace, esd::two_qubit_basis_labels()),
                    esd::InvalidDensityMatrix);

    ComplexMatrix indefinite(4, 4);
    indefinite(0, 0) = 1.5;
    indefinite(1, 1) = -0.5;
    CHECK_THROWS_AS(DensityMatrix(indefinite, esd::two_qubit_basis_labels()),
                    esd::InvalidDensityMatrix);

    ComplexMatrix ok = ComplexMatrix::identity(4) * Complex{0.25, 0.0};
    CHECK_NOTHROW(DensityMatrix(ok, esd::two_qubit_basis_labels()));
}

TEST_CASE("random_product_state is separable and deterministic") {
    const DensityMatrix a = esd::random_product_state(42);
    const DensityMatrix b = esd::random_product_state(42);
    CHECK(esd::max_abs_diff(a.matrix(), b.matrix()) == 0.0);

    for (std::uint64_t seed : {1ull, 2ull, 3ull, 17ull, 99ull, 123456ull}) {
        const DensityMatrix rho = esd::random_product_state(seed);
        CHECK(esd::concurrence(rho) <= 1e-9);
        for (int k = 0; k < 32; ++k) {
            const double theta = k * 2.0 * M_PI / 32.0;
            CHECK(esd::witness_reading(rho, theta).expectation >= -1e-9);
        }
    }
}

TEST_CASE("random_xstate samples valid parameters") {
    for (std::uint64_t seed = 1; seed <= 200; ++seed) {
        CHECK_NOTHROW(esd::xstate_to_density(esd::random_xstate(seed)));
    }
}
