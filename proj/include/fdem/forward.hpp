#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "fdem/earth_model.hpp"
#include "fdem/geometry.hpp"
#include "fdem/types.hpp"

namespace fdem {

// Values of |u_k d_k| beyond this saturate tanh to exactly 1 (real part test,
// which is what controls the size of exp(-2 u d)).
inline constexpr double kTanhSaturation = 20.0;

struct LayerPropagation {
    std::vector<cplx> u;  // propagation constant, 1/m
    std::vector<cplx> N;  // intrinsic admittance
    std::vector<cplx> Y;  // surface admittance seen from the top of layer k
    cplx N0;              // free space
};

// The kernel-level functions take angular frequency; they also accept a
// negative omega, which conjugates the result.
[[nodiscard]] cplx propagation_constant(double sigma, double mu, double lambda, double omega);
[[nodiscard]] LayerPropagation layer_propagation(const LayeredEarth& model, double lambda, double omega);
[[nodiscard]] cplx surface_admittance(const LayeredEarth& model, double lambda, double omega);
[[nodiscard]] cplx reflection_factor(const LayeredEarth& model, double lambda, double omega);

struct ForwardResponse {
    Measurement measurement;
    cplx value;  // Hs/Hp

    [[nodiscard]] double quadrature() const noexcept { return value.imag(); }
    [[nodiscard]] double in_phase() const noexcept { return value.real(); }
};

[[nodiscard]] ForwardResponse response(const LayeredEarth& model, const Measurement& m);
[[nodiscard]] ForwardResponse response(const LayeredEarth& model, Orientation orientation, double height_m,
                                       double frequency_hz, double spacing_m);
[[nodiscard]] ResponseSet response_batch(const LayeredEarth& model, const MeasurementGeometry& geometry);

struct ResponseDerivatives {
    cplx value;
    std::vector<cplx> d_sigma;  // dM/dsigma_k, per S/m
    std::vector<cplx> d_mu;     // dM/dmu_k, per H/m
};

// Exact derivatives of the filtered response with respect to every layer's
// conductivity and permeability, by reverse differentiation of the
// admittance recursion at each filter node.
[[nodiscard]] ResponseDerivatives response_derivatives(const LayeredEarth& model, const Measurement& m);

// As above without the sign checks on the model, for inversion iterates that
// may leave the physical model space. Layer counts are still checked.
[[nodiscard]] ResponseSet response_batch_unchecked(const LayeredEarth& model, const MeasurementGeometry& geometry);
[[nodiscard]] ResponseDerivatives response_derivatives_unchecked(const LayeredEarth& model, const Measurement& m);

[[nodiscard]] double lin_forward(double sigma, double frequency_hz, double spacing_m);
[[nodiscard]] double apparent_conductivity(double q, double frequency_hz, double spacing_m);

enum class QuadratureUnit { MilliSiemensPerMetre, PartsPerMillion };
enum class InPhaseUnit { PartsPerThousand, PartsPerMillion };

struct DeviceScale {
    QuadratureUnit q = QuadratureUnit::MilliSiemensPerMetre;
    InPhaseUnit p = InPhaseUnit::PartsPerThousand;
    bool operator==(const DeviceScale&) const = default;
};

[[nodiscard]] QuadratureUnit parse_quadrature_unit(std::string_view tag);
[[nodiscard]] InPhaseUnit parse_in_phase_unit(std::string_view tag);
[[nodiscard]] std::string_view to_string(QuadratureUnit u) noexcept;
[[nodiscard]] std::string_view to_string(InPhaseUnit u) noexcept;

struct DeviceReading {
    double q = 0.0;            // in the device's Q unit
    double p = 0.0;            // in the device's P unit
    double q_mS_per_m = 0.0;   // apparent conductivity, always available
};

[[nodiscard]] DeviceReading to_device_units(const ForwardResponse& r, DeviceScale scale);

}  // namespace fdem
