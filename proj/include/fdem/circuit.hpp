#pragma once

#include "fdem/types.hpp"

namespace fdem {

struct LoopCircuit {
    double resistance_ohm = 0.0;
    double inductance_h = 1.0;
    double omega = 1.0;  // rad/s
};

struct CouplingChain {
    double m_ts = 1.0;     // transmitter to target
    double m_sr = 1.0;     // target to receiver
    double m_third = 1.0;  // the denominator mutual inductance
    double inductance_h = 1.0;
};

struct WavenumberParams {
    double sigma = 0.0;    // S/m
    double mu = kMu0;      // H/m
    double epsilon = kEpsilon0;
    double omega = 1.0;    // rad/s
};

void require_valid(const LoopCircuit& c);
void require_valid(const CouplingChain& chain);
void require_valid(const WavenumberParams& p);

// k = a + ib including displacement currents.
[[nodiscard]] cplx wavenumber_full(const WavenumberParams& p);
// sqrt(i omega mu sigma)
[[nodiscard]] cplx wavenumber_quasi_static(double sigma, double mu, double omega);

[[nodiscard]] double circuit_induction_number(const LoopCircuit& c);
[[nodiscard]] double phase_lag(const LoopCircuit& c);
[[nodiscard]] cplx impedance(const LoopCircuit& c);
[[nodiscard]] double impedance_magnitude(const LoopCircuit& c);
// Eddy-current phasor relative to the primary current, for an induced EMF of
// amplitude emf_amplitude.
[[nodiscard]] cplx eddy_current(const LoopCircuit& c, double emf_amplitude);

[[nodiscard]] cplx response_function(double beta);
[[nodiscard]] double coupling_coefficient(const CouplingChain& chain);
[[nodiscard]] cplx coupled_response(const CouplingChain& chain, const LoopCircuit& c);

}  // namespace fdem
