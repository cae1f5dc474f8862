#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fdem/earth_model.hpp"
#include "fdem/geometry.hpp"
#include "fdem/linalg.hpp"

namespace fdem {

enum class Method { GN, MNGN, MNGN2_A, MNGN2_AB, MNGN2_ABD };
enum class DataComponent { Quadrature, InPhase, Complex };
enum class InversionMode { Sigma, Mu };
enum class JacobianMethod { Analytic, FiniteDifference };

[[nodiscard]] Method parse_method(std::string_view tag);
[[nodiscard]] std::string_view to_string(Method m) noexcept;
[[nodiscard]] DataComponent parse_data_component(std::string_view tag);
[[nodiscard]] std::string_view to_string(DataComponent c) noexcept;
[[nodiscard]] InversionMode parse_mode(std::string_view tag);
[[nodiscard]] std::string_view to_string(InversionMode m) noexcept;

// Stacks [Re; Im] for complex data, or one block for Q-only / P-only.
[[nodiscard]] Vector realify(const std::vector<cplx>& values, DataComponent component);

// The unknowns: conductivities (S/m) in sigma mode, relative permeabilities
// in mu mode. The other block stays at the values of the template model.
[[nodiscard]] Vector model_vector(const LayeredEarth& model, InversionMode mode);
[[nodiscard]] LayeredEarth apply_model_vector(const LayeredEarth& base, const Vector& x, InversionMode mode);

[[nodiscard]] Vector residual(const LayeredEarth& model, const ResponseSet& data, DataComponent component);
[[nodiscard]] Matrix jacobian(const LayeredEarth& model, const MeasurementGeometry& geometry, InversionMode mode,
                              DataComponent component, JacobianMethod method = JacobianMethod::Analytic);

struct InversionOptions {
    Method method = Method::GN;
    DataComponent component = DataComponent::Complex;
    InversionMode mode = InversionMode::Sigma;
    RegularizerKind regularizer = RegularizerKind::Identity;
    JacobianMethod jacobian = JacobianMethod::Analytic;
    std::optional<std::size_t> fixed_rank;  // unset: discrepancy principle
    double noise_level = 0.0;               // relative, ||e|| / ||b||
    double safety = 1.1;
    std::size_t max_iterations = 50;
    double step_tolerance = 1e-8;      // ||dx|| / ||x||
    double residual_tolerance = 1e-9;  // ||r|| / ||b||
    std::vector<double> profile;       // model profile; empty means zero
    bool check_projector = false;
};

struct IterationRecord {
    double residual = 0.0;  // ||r|| after the accepted update
    double step_norm = 0.0;
    std::size_t rank = 0;
    double alpha = 0.0;
    double beta = 0.0;
    // Filled when InversionOptions::check_projector is set.
    double projector_idempotence = 0.0;
    double projector_symmetry = 0.0;
    double projector_annihilation = 0.0;
};

struct InversionResult {
    Vector x;
    LayeredEarth model;
    double data_norm = 0.0;
    double initial_residual = 0.0;
    std::vector<IterationRecord> iterations;
    bool converged = false;
    std::string reason;
    std::vector<std::string> warnings;
    // ||P (x - profile)|| / ||x|| at the final iterate, with the projector of
    // the final Jacobian at the final rank.
    double stationarity = 0.0;

    [[nodiscard]] std::vector<double> residual_history() const;
    [[nodiscard]] std::vector<double> step_history() const;
    [[nodiscard]] std::vector<std::size_t> rank_history() const;
};

// Generic nonlinear least-squares problem min ||r(x)||.
struct LeastSquaresProblem {
    std::function<Vector(const Vector&)> residual;
    std::function<Matrix(const Vector&)> jacobian;
    double data_norm = 1.0;
};

[[nodiscard]] InversionResult solve(const LeastSquaresProblem& problem, const Vector& x0,
                                    const InversionOptions& opts);

// Homogeneous start at the mean apparent conductivity of the data, mu_r = 1,
// on the given layering.
[[nodiscard]] LayeredEarth default_start(const ResponseSet& data, const std::vector<double>& thickness);

[[nodiscard]] InversionResult gauss_newton(const ResponseSet& data, const LayeredEarth& start,
                                           const InversionOptions& opts);
[[nodiscard]] InversionResult mngn_iterate(const ResponseSet& data, const LayeredEarth& start,
                                           const InversionOptions& opts);
// Dispatches on opts.method.
[[nodiscard]] InversionResult invert(const ResponseSet& data, const LayeredEarth& start, const InversionOptions& opts);

[[nodiscard]] ResponseSet add_noise(const ResponseSet& data, double level, std::uint64_t seed);

struct SectionEntry {
    std::optional<InversionResult> result;
    std::string error;
};

[[nodiscard]] std::vector<SectionEntry> invert_section(const std::vector<ResponseSet>& columns,
                                                       const LayeredEarth& start, const InversionOptions& opts);

}  // namespace fdem
