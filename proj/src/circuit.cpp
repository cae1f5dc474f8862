#include "fdem/circuit.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "fdem/error.hpp"

namespace fdem {

void require_valid(const LoopCircuit& c)
{
    std::vector<std::string> issues;
    if (!(c.resistance_ohm >= 0.0)) issues.emplace_back("resistance must be non-negative");
    if (!(c.inductance_h > 0.0)) issues.emplace_back("inductance must be positive");
    if (!(c.omega > 0.0)) issues.emplace_back("angular frequency must be positive");
    if (!issues.empty()) throw ValidationError(std::move(issues));
}

void require_valid(const CouplingChain& chain)
{
    if (!(chain.m_ts > 0.0 && chain.m_sr > 0.0 && chain.m_third > 0.0 && chain.inductance_h > 0.0))
        throw ValidationError({"mutual and self inductances must be positive"});
}

void require_valid(const WavenumberParams& p)
{
    std::vector<std::string> issues;
    if (!(p.sigma >= 0.0)) issues.emplace_back("conductivity must be non-negative");
    if (!(p.mu >= 0.0)) issues.emplace_back("permeability must be non-negative");
    if (!(p.epsilon >= 0.0)) issues.emplace_back("permittivity must be non-negative");
    if (!(p.omega > 0.0)) issues.emplace_back("angular frequency must be positive");
    if (!issues.empty()) throw ValidationError(std::move(issues));
}

cplx wavenumber_full(const WavenumberParams& p)
{
    require_valid(p);
    // Same closed forms with omega*eps moved inside the square roots, which
    // avoids the cancellation in sqrt(1 + x^2) - 1 and allows eps = 0.
    const double we = p.omega * p.epsilon;
    const double root = std::hypot(we, p.sigma);
    const double half = 0.5 * p.omega * p.mu;
    const double a = std::sqrt(half * (root + we));
    const double b = root + we > 0.0 ? std::sqrt(half * p.sigma * p.sigma / (root + we)) : 0.0;
    return {a, b};
}

cplx wavenumber_quasi_static(double sigma, double mu, double omega)
{
    return std::sqrt(cplx(0.0, omega * mu * sigma));
}

double circuit_induction_number(const LoopCircuit& c)
{
    require_valid(c);
    if (c.resistance_ohm == 0.0) return std::numeric_limits<double>::infinity();
    return c.omega * c.inductance_h / c.resistance_ohm;
}

double phase_lag(const LoopCircuit& c)
{
    require_valid(c);
    if (c.resistance_ohm == 0.0) return std::numbers::pi / 2.0;
    return std::atan(c.omega * c.inductance_h / c.resistance_ohm);
}

cplx impedance(const LoopCircuit& c)
{
    require_valid(c);
    return {c.resistance_ohm, c.omega * c.inductance_h};
}

double impedance_magnitude(const LoopCircuit& c)
{
    return std::abs(impedance(c));
}

cplx eddy_current(const LoopCircuit& c, double emf_amplitude)
{
    const double alpha = phase_lag(c);
    return emf_amplitude / impedance_magnitude(c) * std::polar(1.0, -(std::numbers::pi / 2.0 + alpha));
}

cplx response_function(double beta)
{
    if (!(beta >= 0.0)) throw ValidationError({"induction number must be non-negative"});
    if (std::isinf(beta)) return {1.0, 0.0};
    const double d = 1.0 + beta * beta;
    return {beta * beta / d, beta / d};
}

double coupling_coefficient(const CouplingChain& chain)
{
    require_valid(chain);
    return -(chain.m_ts * chain.m_sr) / (chain.m_third * chain.inductance_h);
}

cplx coupled_response(const CouplingChain& chain, const LoopCircuit& c)
{
    return coupling_coefficient(chain) * response_function(circuit_induction_number(c));
}

}  // namespace fdem
