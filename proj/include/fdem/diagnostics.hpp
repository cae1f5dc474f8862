#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "fdem/earth_model.hpp"
#include "fdem/geometry.hpp"
#include "fdem/types.hpp"

namespace fdem {

// Returns +infinity for sigma == 0 (no attenuation).
[[nodiscard]] double skin_depth_homogeneous(double sigma, double mu, double frequency_hz);
[[nodiscard]] cplx c_response(const LayeredEarth& model, double frequency_hz);
[[nodiscard]] double skin_depth_layered(const LayeredEarth& model, double frequency_hz);
[[nodiscard]] double induction_number(double length_m, double delta_m);

// Cell size used when skin depths are quoted for a survey design. The layered
// model is first resampled onto cells of this size (midpoint rule).
inline constexpr double kSkinDepthCell = 0.2;
inline constexpr double kSkinDepthMaxDepth = 30.0;

// Skin depth of the model as seen through the survey-design discretization.
// cell <= 0 uses the layering exactly.
[[nodiscard]] double survey_skin_depth(const LayeredEarth& model, double frequency_hz,
                                       double cell = kSkinDepthCell);

struct SensitivityGrid {
    double cell_m = 0.1;
    double max_depth_m = 15.0;
};

struct SensitivityProfile {
    Measurement measurement;
    double cell_m = 0.0;
    std::vector<double> depths_m;  // cell tops, first is 0
    std::vector<cplx> s_sigma;     // dM/dsigma per metre of cell
    std::vector<cplx> s_mu;        // dM/dmu per metre of cell
    cplx basement_sigma;           // dM/dsigma of the half-space below the grid
    cplx basement_mu;
};

[[nodiscard]] SensitivityProfile sensitivity_analytic(const LayeredEarth& model, const Measurement& m,
                                                      const SensitivityGrid& grid = {});

struct FdStep {
    double relative = 1e-6;
    double sigma_floor = 1e-9;
    double mu_floor = 1e-9 * kMu0;
};

[[nodiscard]] SensitivityProfile sensitivity_fd(const LayeredEarth& model, const Measurement& m,
                                                const SensitivityGrid& grid = {}, const FdStep& step = {});

// Largest |analytic - fd| over the profile, relative to the largest |analytic|.
// Both sigma and mu blocks, real and imaginary parts.
[[nodiscard]] double max_relative_deviation(const SensitivityProfile& a, const SensitivityProfile& b);

enum class SensitivityComponent { SigmaQuadrature, SigmaInPhase, SigmaMagnitude, MuQuadrature, MuInPhase, MuMagnitude };

[[nodiscard]] SensitivityComponent parse_component(std::string_view tag);
[[nodiscard]] std::string_view to_string(SensitivityComponent c) noexcept;

struct CumulativeCurve {
    std::vector<double> depths_m;  // cell bottoms
    std::vector<double> values;    // non-decreasing, last is 1

    // Piecewise-linear value at depth z (0 at the surface).
    [[nodiscard]] double at(double z) const;
};

[[nodiscard]] CumulativeCurve cumulative_response(const SensitivityProfile& profile,
                                                  SensitivityComponent component = SensitivityComponent::SigmaQuadrature);

// Threshold fitted once so that the Dualem-21H HCP 2 m curve over model M1 at
// 0.9 m reaches it at 6.7 m; see calibrate_tau.
inline constexpr double kDefaultDoiThreshold = 0.914257;

struct DoiOptions {
    SensitivityGrid grid;
    SensitivityComponent component = SensitivityComponent::SigmaQuadrature;
};

struct DoiEstimate {
    double doi_m = 0.0;
    double tau = 0.0;
    bool reached = false;
    double max_reached = 0.0;  // largest curve value above the grid bottom
    CumulativeCurve curve;
};

[[nodiscard]] DoiEstimate doi_from_curve(const CumulativeCurve& curve, double tau);
[[nodiscard]] DoiEstimate depth_of_investigation(const LayeredEarth& model, const Measurement& m, double tau,
                                                 const DoiOptions& options = {});

// Midpoint of the threshold interval for which the curve first reaches tau at
// the grid depth closest to target_m.
[[nodiscard]] double calibrate_tau(const CumulativeCurve& curve, double target_m);

}  // namespace fdem
