#include "fdem/forward.hpp"

#include <cmath>
#include <cstring>
#include <map>
#include <utility>

#include "fdem/error.hpp"
#include "fdem/hankel.hpp"

namespace fdem {

namespace {

constexpr cplx kI{0.0, 1.0};

cplx saturating_tanh(cplx x)
{
    if (x.real() > kTanhSaturation) return {1.0, 0.0};
    return std::tanh(x);
}

struct OrientationKernel {
    int order;
    int lambda_power;
    int rho_power;
};

OrientationKernel kernel_of(Orientation o)
{
    switch (o) {
    case Orientation::HCP: return {0, 2, 3};
    case Orientation::VCP: return {1, 1, 2};
    case Orientation::PERP: return {1, 2, 2};
    }
    throw SchemaError("unknown orientation");
}

// Per-node weight of R(lambda_s) in the filtered response, i.e. the response is
// sum_s coeff_s * R_s. Includes the sign, the rho power, the height decay and
// the filter weight.
std::vector<double> node_coefficients(const Measurement& m, std::span<const double> lambdas)
{
    const auto k = kernel_of(m.orientation);
    const auto& filter = HankelFilter::standard(k.order);
    const auto w = filter.weights();
    const double scale = -std::pow(m.spacing_m, k.rho_power) / m.spacing_m;
    std::vector<double> c(lambdas.size());
    for (std::size_t s = 0; s < c.size(); ++s) {
        const double lam = lambdas[s];
        c[s] = scale * w[s] * std::exp(-2.0 * lam * m.height_m) * std::pow(lam, k.lambda_power);
    }
    return c;
}

std::vector<double> filter_nodes(Orientation o, double rho)
{
    return HankelFilter::standard(kernel_of(o).order).nodes(rho);
}

void check_measurement(const Measurement& m)
{
    std::vector<std::string> issues;
    if (!(m.spacing_m > 0.0) || !std::isfinite(m.spacing_m)) issues.emplace_back("spacing must be positive");
    if (!(m.frequency_hz > 0.0) || !std::isfinite(m.frequency_hz))
        issues.emplace_back("frequency must be positive");
    if (!(m.height_m >= 0.0) || !std::isfinite(m.height_m)) issues.emplace_back("height must be non-negative");
    if (!issues.empty()) throw ValidationError(std::move(issues));
}

void require_shape(const LayeredEarth& model)
{
    const auto n = model.sigma.size();
    if (n == 0 || model.mu_r.size() != n || model.thickness.size() + 1 != n)
        throw ValidationError({"model arrays have inconsistent lengths"});
}

cplx sum_nodes(std::span<const double> coeff, std::span<const cplx> r, std::span<const double> lambdas)
{
    cplx acc{0.0, 0.0};
    for (std::size_t s = 0; s < coeff.size(); ++s) {
        if (!std::isfinite(r[s].real()) || !std::isfinite(r[s].imag())) throw QuadratureError(s, lambdas[s]);
        if (coeff[s] != 0.0) acc += coeff[s] * r[s];
    }
    return acc;
}

std::vector<cplx> reflection_at(const LayeredEarth& model, std::span<const double> lambdas, double omega)
{
    std::vector<cplx> r(lambdas.size());
    for (std::size_t s = 0; s < r.size(); ++s) r[s] = reflection_factor(model, lambdas[s], omega);
    return r;
}

}  // namespace

cplx propagation_constant(double sigma, double mu, double lambda, double omega)
{
    return std::sqrt(cplx(lambda * lambda, sigma * mu * omega));
}

LayerPropagation layer_propagation(const LayeredEarth& model, double lambda, double omega)
{
    const auto n = model.layers();
    LayerPropagation p;
    p.u.resize(n);
    p.N.resize(n);
    p.Y.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double mu = model.mu(k);
        p.u[k] = propagation_constant(model.sigma[k], mu, lambda, omega);
        p.N[k] = p.u[k] / cplx(0.0, omega * mu);
    }
    p.N0 = cplx(lambda, 0.0) / cplx(0.0, omega * kMu0);
    p.Y[n - 1] = p.N[n - 1];
    for (std::size_t k = n - 1; k-- > 0;) {
        const cplx t = saturating_tanh(p.u[k] * model.thickness[k]);
        const cplx& Nk = p.N[k];
        const cplx& Yb = p.Y[k + 1];
        p.Y[k] = Nk * ((Yb + Nk * t) / (Nk + Yb * t));
    }
    return p;
}

cplx surface_admittance(const LayeredEarth& model, double lambda, double omega)
{
    return layer_propagation(model, lambda, omega).Y.front();
}

cplx reflection_factor(const LayeredEarth& model, double lambda, double omega)
{
    const auto n = model.layers();
    const cplx N0 = cplx(lambda, 0.0) / cplx(0.0, omega * kMu0);
    cplx Y = 0.0;
    cplx u, N, t;
    for (std::size_t k = n; k-- > 0;) {
        const double mu = model.mu(k);
        // Finely resampled models repeat the same layer many times over.
        const bool repeat = k + 2 < n && model.sigma[k] == model.sigma[k + 1] &&
                            model.mu_r[k] == model.mu_r[k + 1] && model.thickness[k] == model.thickness[k + 1];
        if (!repeat) {
            u = propagation_constant(model.sigma[k], mu, lambda, omega);
            N = u / cplx(0.0, omega * mu);
        }
        if (k == n - 1) {
            Y = N;
        } else {
            if (!repeat) t = saturating_tanh(u * model.thickness[k]);
            Y = N * ((Y + N * t) / (N + Y * t));
        }
    }
    return (N0 - Y) / (N0 + Y);
}

ForwardResponse response(const LayeredEarth& model, const Measurement& m)
{
    require_valid(model);
    check_measurement(m);
    const auto lambdas = filter_nodes(m.orientation, m.spacing_m);
    const auto coeff = node_coefficients(m, lambdas);
    const auto r = reflection_at(model, lambdas, angular_frequency(m.frequency_hz));
    return {m, sum_nodes(coeff, r, lambdas)};
}

ForwardResponse response(const LayeredEarth& model, Orientation orientation, double height_m,
                         double frequency_hz, double spacing_m)
{
    return response(model, Measurement{orientation, spacing_m, frequency_hz, height_m});
}

ResponseSet response_batch(const LayeredEarth& model, const MeasurementGeometry& geometry)
{
    require_valid(model);
    return response_batch_unchecked(model, geometry);
}

ResponseSet response_batch_unchecked(const LayeredEarth& model, const MeasurementGeometry& geometry)
{
    require_shape(model);
    require_valid(geometry);
    ResponseSet out{geometry, std::vector<cplx>(geometry.size())};

    // R depends only on (node set, frequency); orientations sharing a filter
    // order and spacing reuse it across heights.
    std::map<std::tuple<int, double, double>, std::pair<std::vector<double>, std::vector<cplx>>> cache;
    for (std::size_t i = 0; i < out.values.size(); ++i) {
        const auto m = geometry.at(i);
        try {
            check_measurement(m);
            const auto key = std::make_tuple(kernel_of(m.orientation).order, m.spacing_m, m.frequency_hz);
            auto it = cache.find(key);
            if (it == cache.end()) {
                auto lambdas = filter_nodes(m.orientation, m.spacing_m);
                auto r = reflection_at(model, lambdas, angular_frequency(m.frequency_hz));
                it = cache.emplace(key, std::make_pair(std::move(lambdas), std::move(r))).first;
            }
            const auto& [lambdas, r] = it->second;
            out.values[i] = sum_nodes(node_coefficients(m, lambdas), r, lambdas);
        } catch (const Error& e) {
            throw Error("measurement " + std::to_string(i) + " (" + std::string(to_string(m.orientation)) +
                        ", spacing " + std::to_string(m.spacing_m) + " m, " + std::to_string(m.frequency_hz) +
                        " Hz, height " + std::to_string(m.height_m) + " m): " + e.what());
        }
    }
    return out;
}

ResponseDerivatives response_derivatives(const LayeredEarth& model, const Measurement& m)
{
    require_valid(model);
    return response_derivatives_unchecked(model, m);
}

ResponseDerivatives response_derivatives_unchecked(const LayeredEarth& model, const Measurement& m)
{
    require_shape(model);
    check_measurement(m);
    const auto n = model.layers();
    const double omega = angular_frequency(m.frequency_hz);
    const auto lambdas = filter_nodes(m.orientation, m.spacing_m);
    const auto coeff = node_coefficients(m, lambdas);

    ResponseDerivatives out{cplx{0.0, 0.0}, std::vector<cplx>(n), std::vector<cplx>(n)};
    std::vector<cplx> u(n), N(n), t(n), Y(n), gN(n), gt(n);
    for (std::size_t s = 0; s < lambdas.size(); ++s) {
        if (coeff[s] == 0.0) continue;
        const double lam = lambdas[s];
        for (std::size_t k = 0; k < n; ++k) {
            u[k] = propagation_constant(model.sigma[k], model.mu(k), lam, omega);
            N[k] = u[k] / cplx(0.0, omega * model.mu(k));
        }
        Y[n - 1] = N[n - 1];
        for (std::size_t k = n - 1; k-- > 0;) {
            t[k] = saturating_tanh(u[k] * model.thickness[k]);
            Y[k] = N[k] * ((Y[k + 1] + N[k] * t[k]) / (N[k] + Y[k + 1] * t[k]));
        }
        const cplx N0 = cplx(lam, 0.0) / cplx(0.0, omega * kMu0);
        const cplx R = (N0 - Y[0]) / (N0 + Y[0]);
        if (!std::isfinite(R.real()) || !std::isfinite(R.imag())) throw QuadratureError(s, lam);
        out.value += coeff[s] * R;

        // Reverse sweep: g is the adjoint of Y_k.
        cplx g = coeff[s] * (-2.0 * N0 / ((N0 + Y[0]) * (N0 + Y[0])));
        for (std::size_t k = 0; k + 1 < n; ++k) {
            const cplx& Yb = Y[k + 1];
            const cplx A = Yb + N[k] * t[k];
            const cplx B = N[k] + Yb * t[k];
            const cplx B2 = B * B;
            gN[k] = g * ((A * B + N[k] * t[k] * B - N[k] * A) / B2);
            gt[k] = g * (N[k] * (N[k] * N[k] - Yb * Yb) / B2);
            g *= N[k] * N[k] * (1.0 - t[k] * t[k]) / B2;
        }
        gN[n - 1] = g;
        gt[n - 1] = 0.0;

        for (std::size_t k = 0; k < n; ++k) {
            const double mu = model.mu(k);
            const cplx dN_du = 1.0 / cplx(0.0, omega * mu);
            cplx gu = gN[k] * dN_du;
            if (k + 1 < n && (u[k] * model.thickness[k]).real() <= kTanhSaturation)
                gu += gt[k] * (model.thickness[k] * (1.0 - t[k] * t[k]));
            out.d_sigma[k] += gu * (kI * mu * omega / (2.0 * u[k]));
            out.d_mu[k] += gu * (kI * model.sigma[k] * omega / (2.0 * u[k])) - gN[k] * N[k] / mu;
        }
    }
    return out;
}

double lin_forward(double sigma, double frequency_hz, double spacing_m)
{
    return angular_frequency(frequency_hz) * kMu0 * spacing_m * spacing_m * sigma / 4.0;
}

double apparent_conductivity(double q, double frequency_hz, double spacing_m)
{
    return 4.0 / (angular_frequency(frequency_hz) * kMu0 * spacing_m * spacing_m) * q;
}

QuadratureUnit parse_quadrature_unit(std::string_view tag)
{
    if (tag == "mS/m") return QuadratureUnit::MilliSiemensPerMetre;
    if (tag == "ppm") return QuadratureUnit::PartsPerMillion;
    throw SchemaError("unknown quadrature unit \"" + std::string(tag) + "\"");
}

InPhaseUnit parse_in_phase_unit(std::string_view tag)
{
    if (tag == "ppt") return InPhaseUnit::PartsPerThousand;
    if (tag == "ppm") return InPhaseUnit::PartsPerMillion;
    throw SchemaError("unknown in-phase unit \"" + std::string(tag) + "\"");
}

std::string_view to_string(QuadratureUnit u) noexcept
{
    return u == QuadratureUnit::MilliSiemensPerMetre ? "mS/m" : "ppm";
}

std::string_view to_string(InPhaseUnit u) noexcept
{
    return u == InPhaseUnit::PartsPerThousand ? "ppt" : "ppm";
}

DeviceReading to_device_units(const ForwardResponse& r, DeviceScale scale)
{
    DeviceReading out;
    out.q_mS_per_m =
        1000.0 * apparent_conductivity(r.quadrature(), r.measurement.frequency_hz, r.measurement.spacing_m);
    out.q = scale.q == QuadratureUnit::MilliSiemensPerMetre ? out.q_mS_per_m : 1e6 * r.quadrature();
    out.p = scale.p == InPhaseUnit::PartsPerThousand ? 1e3 * r.in_phase() : 1e6 * r.in_phase();
    return out;
}

}  // namespace fdem
