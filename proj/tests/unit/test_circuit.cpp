#include <catch_amalgamated.hpp>

#include <cmath>
#include <limits>
#include <numbers>

#include "fdem/circuit.hpp"
#include "fdem/error.hpp"

using namespace fdem;

TEST_CASE("response function examples and limits")
{
    CHECK(response_function(0.0) == cplx(0.0, 0.0));
    CHECK(response_function(1.0) == cplx(0.5, 0.5));
    CHECK(response_function(std::numeric_limits<double>::infinity()) == cplx(1.0, 0.0));
    CHECK(std::abs(response_function(1e9) - cplx(1.0, 0.0)) < 1e-8);
    CHECK(std::abs(response_function(1e-9)) < 1e-8);
    CHECK_THROWS_AS(response_function(-1.0), ValidationError);
}

TEST_CASE("response function invariants on a dense log grid")
{
    double prev_re = -1.0;
    double peak_beta = 0.0;
    double peak = -1.0;
    for (int i = 0; i <= 4000; ++i) {
        const double beta = std::pow(10.0, -4.0 + 8.0 * i / 4000.0);
        const auto g = response_function(beta);
        REQUIRE(std::abs(g) < 1.0);
        REQUIRE(g.real() >= 0.0);
        REQUIRE(g.imag() >= 0.0);
        REQUIRE(g.real() > prev_re);
        prev_re = g.real();
        if (g.imag() > peak) {
            peak = g.imag();
            peak_beta = beta;
        }
    }
    CHECK(peak_beta == Catch::Approx(1.0).epsilon(0.01));
    CHECK(peak == Catch::Approx(0.5).epsilon(1e-5));
    // Im G rises before the peak and falls after it.
    CHECK(response_function(0.5).imag() < response_function(0.9).imag());
    CHECK(response_function(1.1).imag() > response_function(2.0).imag());
}

TEST_CASE("coupled response scales the response function")
{
    const CouplingChain unit{1.0, 1.0, 1.0, 1.0};
    CHECK(coupling_coefficient(unit) == -1.0);
    const LoopCircuit c{2.0, 1.0, 2.0};  // beta = omega L / R = 1
    CHECK(circuit_induction_number(c) == 1.0);
    CHECK(coupled_response(unit, c) == cplx(-0.5, -0.5));

    const CouplingChain k{2.0, 3.0, 4.0, 0.5};
    CHECK(coupling_coefficient(k) == -3.0);
    const LoopCircuit zero_beta{std::numeric_limits<double>::infinity(), 1.0, 1.0};
    CHECK(coupled_response(k, zero_beta) == cplx(0.0, 0.0));
    CHECK_THROWS_AS(coupling_coefficient({0.0, 1.0, 1.0, 1.0}), ValidationError);
}

TEST_CASE("phase lag limits are exact")
{
    CHECK(phase_lag({0.0, 1e-3, 1e4}) == std::numbers::pi / 2.0);
    CHECK(phase_lag({std::numeric_limits<double>::infinity(), 1e-3, 1e4}) == 0.0);
    CHECK(phase_lag({1.0, 1.0, 1.0}) == Catch::Approx(std::numbers::pi / 4.0));
    CHECK(std::isinf(circuit_induction_number({0.0, 1.0, 1.0})));
}

TEST_CASE("impedance and eddy current phasor")
{
    const LoopCircuit c{3.0, 2.0, 2.0};
    CHECK(impedance(c) == cplx(3.0, 4.0));
    CHECK(impedance_magnitude(c) == 5.0);
    const auto i = eddy_current(c, 10.0);
    CHECK(std::abs(i) == Catch::Approx(2.0));
    CHECK(std::arg(i) == Catch::Approx(-(std::numbers::pi / 2.0 + std::atan(4.0 / 3.0))));
    // Purely inductive loop: the current lags the EMF by a further pi/2.
    const auto pure = eddy_current({0.0, 1.0, 1.0}, 1.0);
    CHECK(std::abs(pure - cplx(-1.0, 0.0)) < 1e-15);
    CHECK_THROWS_AS(impedance({-1.0, 1.0, 1.0}), ValidationError);
}

TEST_CASE("wavenumber with displacement currents")
{
    const WavenumberParams p{0.01, kMu0, 10.0 * kEpsilon0, 2.0 * std::numbers::pi * 1e6};
    const auto k = wavenumber_full(p);
    const cplx k2 = cplx(p.omega * p.omega * p.mu * p.epsilon, p.omega * p.mu * p.sigma);
    CHECK(std::abs(k * k - k2) <= 1e-12 * std::abs(k2));
    CHECK(k.real() > 0.0);
    CHECK(k.imag() > 0.0);

    const WavenumberParams lossless{0.0, kMu0, kEpsilon0, 1e6};
    CHECK(wavenumber_full(lossless).imag() == 0.0);
    CHECK(wavenumber_full(lossless).real() == Catch::Approx(1e6 / 299792458.0).epsilon(1e-9));
}

TEST_CASE("quasi-static limit of the wavenumber")
{
    for (double sigma : {1e-3, 0.1, 2.0}) {
        for (double f : {100.0, 9000.0, 93000.0}) {
            const double omega = 2.0 * std::numbers::pi * f;
            const WavenumberParams p{sigma, kMu0, kEpsilon0, omega};
            if (sigma / (omega * p.epsilon) <= 1e4) continue;
            const auto qs = wavenumber_quasi_static(sigma, kMu0, omega);
            CHECK(std::abs(wavenumber_full(p) - qs) / std::abs(qs) < 1e-4);
        }
    }
}
