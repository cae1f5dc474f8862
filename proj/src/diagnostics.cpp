#include "fdem/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fdem/error.hpp"
#include "fdem/forward.hpp"

namespace fdem {

double skin_depth_homogeneous(double sigma, double mu, double frequency_hz)
{
    if (!(sigma >= 0.0) || !(mu > 0.0) || !(frequency_hz > 0.0))
        throw ValidationError({"skin depth needs sigma >= 0, mu > 0 and frequency > 0"});
    if (sigma == 0.0) return std::numeric_limits<double>::infinity();
    return std::sqrt(2.0 / (angular_frequency(frequency_hz) * mu * sigma));
}

cplx c_response(const LayeredEarth& model, double frequency_hz)
{
    require_valid(model);
    if (!(frequency_hz > 0.0)) throw ValidationError({"frequency must be positive"});
    for (double s : model.sigma) {
        if (s == 0.0) throw ValidationError({"C-response is undefined for a layer with zero conductivity"});
    }
    const double omega = angular_frequency(frequency_hz);
    const auto n = model.layers();
    auto k_of = [&](std::size_t j) { return std::sqrt(cplx(0.0, omega * model.mu(j) * model.sigma[j])); };
    cplx C = 1.0 / k_of(n - 1);
    for (std::size_t j = n - 1; j-- > 0;) {
        const cplx k = k_of(j);
        const cplx kd = k * model.thickness[j];
        const cplx t = kd.real() > 20.0 ? cplx(1.0, 0.0) : std::tanh(kd);
        C = (1.0 / k) * (k * C + t) / (1.0 + k * C * t);
    }
    return C;
}

double skin_depth_layered(const LayeredEarth& model, double frequency_hz)
{
    return std::sqrt(2.0) * std::abs(c_response(model, frequency_hz));
}

double survey_skin_depth(const LayeredEarth& model, double frequency_hz, double cell)
{
    if (cell <= 0.0 || model.layers() == 1) return skin_depth_layered(model, frequency_hz);
    const double bottom = model.depths().back();
    const double depth = std::max(kSkinDepthMaxDepth, std::ceil(bottom / cell + 1.0) * cell);
    return skin_depth_layered(discretize(model, cell, depth), frequency_hz);
}

double induction_number(double length_m, double delta_m)
{
    if (!(delta_m > 0.0)) throw ValidationError({"skin depth must be positive"});
    return length_m / delta_m;
}

namespace {

SensitivityProfile empty_profile(const LayeredEarth& fine, const Measurement& m, const SensitivityGrid& grid)
{
    SensitivityProfile p;
    p.measurement = m;
    p.cell_m = grid.cell_m;
    const auto cells = fine.layers() - 1;
    p.depths_m.resize(cells);
    for (std::size_t c = 0; c < cells; ++c) p.depths_m[c] = static_cast<double>(c) * grid.cell_m;
    p.s_sigma.resize(cells);
    p.s_mu.resize(cells);
    return p;
}

}  // namespace

SensitivityProfile sensitivity_analytic(const LayeredEarth& model, const Measurement& m, const SensitivityGrid& grid)
{
    const auto fine = discretize(model, grid.cell_m, grid.max_depth_m);
    const auto d = response_derivatives(fine, m);
    auto p = empty_profile(fine, m, grid);
    for (std::size_t c = 0; c < p.depths_m.size(); ++c) {
        p.s_sigma[c] = d.d_sigma[c] / grid.cell_m;
        p.s_mu[c] = d.d_mu[c] / grid.cell_m;
    }
    p.basement_sigma = d.d_sigma.back();
    p.basement_mu = d.d_mu.back();
    return p;
}

SensitivityProfile sensitivity_fd(const LayeredEarth& model, const Measurement& m, const SensitivityGrid& grid,
                                  const FdStep& step)
{
    if (!(step.relative > 0.0)) throw ValidationError({"finite-difference step must be positive"});
    const auto fine = discretize(model, grid.cell_m, grid.max_depth_m);
    auto p = empty_profile(fine, m, grid);

    auto central = [&](std::size_t k, bool mu) {
        auto plus = fine;
        auto minus = fine;
        cplx h;
        if (mu) {
            // Perturb the absolute permeability, stored relative.
            const double dmu = std::max(step.relative * fine.mu(k), step.mu_floor);
            plus.mu_r[k] += dmu / kMu0;
            minus.mu_r[k] -= dmu / kMu0;
            h = (plus.mu_r[k] - minus.mu_r[k]) * kMu0;
        } else {
            const double ds = std::max(step.relative * fine.sigma[k], step.sigma_floor);
            plus.sigma[k] += ds;
            // A negative conductivity is outside the model space; fall back to
            // a one-sided difference at the boundary.
            minus.sigma[k] = std::max(0.0, minus.sigma[k] - ds);
            h = plus.sigma[k] - minus.sigma[k];
        }
        return (response(plus, m).value - response(minus, m).value) / h;
    };

    for (std::size_t c = 0; c < p.depths_m.size(); ++c) {
        p.s_sigma[c] = central(c, false) / grid.cell_m;
        p.s_mu[c] = central(c, true) / grid.cell_m;
    }
    p.basement_sigma = central(fine.layers() - 1, false);
    p.basement_mu = central(fine.layers() - 1, true);
    return p;
}

double max_relative_deviation(const SensitivityProfile& a, const SensitivityProfile& b)
{
    if (a.s_sigma.size() != b.s_sigma.size()) throw ValidationError({"profiles use different grids"});
    auto block = [](const std::vector<cplx>& x, const std::vector<cplx>& y, cplx xb, cplx yb) {
        double scale = std::abs(xb);
        double dev = std::abs(xb - yb);
        for (std::size_t i = 0; i < x.size(); ++i) {
            scale = std::max(scale, std::abs(x[i]));
            dev = std::max(dev, std::abs(x[i] - y[i]));
        }
        return scale > 0.0 ? dev / scale : dev;
    };
    return std::max(block(a.s_sigma, b.s_sigma, a.basement_sigma, b.basement_sigma),
                    block(a.s_mu, b.s_mu, a.basement_mu, b.basement_mu));
}

SensitivityComponent parse_component(std::string_view tag)
{
    if (tag == "sigma_Q") return SensitivityComponent::SigmaQuadrature;
    if (tag == "sigma_P") return SensitivityComponent::SigmaInPhase;
    if (tag == "sigma_abs") return SensitivityComponent::SigmaMagnitude;
    if (tag == "mu_Q") return SensitivityComponent::MuQuadrature;
    if (tag == "mu_P") return SensitivityComponent::MuInPhase;
    if (tag == "mu_abs") return SensitivityComponent::MuMagnitude;
    throw SchemaError("unknown sensitivity component \"" + std::string(tag) + "\"");
}

std::string_view to_string(SensitivityComponent c) noexcept
{
    switch (c) {
    case SensitivityComponent::SigmaQuadrature: return "sigma_Q";
    case SensitivityComponent::SigmaInPhase: return "sigma_P";
    case SensitivityComponent::SigmaMagnitude: return "sigma_abs";
    case SensitivityComponent::MuQuadrature: return "mu_Q";
    case SensitivityComponent::MuInPhase: return "mu_P";
    case SensitivityComponent::MuMagnitude: return "mu_abs";
    }
    return "?";
}

double CumulativeCurve::at(double z) const
{
    if (depths_m.empty() || z <= 0.0) return 0.0;
    if (z >= depths_m.back()) return values.back();
    const auto it = std::lower_bound(depths_m.begin(), depths_m.end(), z);
    const auto i = static_cast<std::size_t>(it - depths_m.begin());
    const double z0 = i == 0 ? 0.0 : depths_m[i - 1];
    const double v0 = i == 0 ? 0.0 : values[i - 1];
    return v0 + (values[i] - v0) * (z - z0) / (depths_m[i] - z0);
}

CumulativeCurve cumulative_response(const SensitivityProfile& profile, SensitivityComponent component)
{
    auto pick = [component](cplx ss, cplx sm) {
        switch (component) {
        case SensitivityComponent::SigmaQuadrature: return std::abs(ss.imag());
        case SensitivityComponent::SigmaInPhase: return std::abs(ss.real());
        case SensitivityComponent::SigmaMagnitude: return std::abs(ss);
        case SensitivityComponent::MuQuadrature: return std::abs(sm.imag());
        case SensitivityComponent::MuInPhase: return std::abs(sm.real());
        case SensitivityComponent::MuMagnitude: return std::abs(sm);
        }
        return 0.0;
    };
    const auto n = profile.depths_m.size();
    CumulativeCurve curve;
    curve.depths_m.resize(n);
    curve.values.resize(n);
    double acc = 0.0;
    for (std::size_t c = 0; c < n; ++c) {
        acc += pick(profile.s_sigma[c], profile.s_mu[c]) * profile.cell_m;
        curve.values[c] = acc;
        curve.depths_m[c] = static_cast<double>(c + 1) * profile.cell_m;
    }
    if (!(acc > 0.0) || !std::isfinite(acc))
        throw ValidationError({"cumulative response is undefined for an all-zero sensitivity profile"});
    for (auto& v : curve.values) v /= acc;
    curve.values.back() = 1.0;
    return curve;
}

DoiEstimate doi_from_curve(const CumulativeCurve& curve, double tau)
{
    if (!(tau > 0.0 && tau < 1.0)) throw ValidationError({"threshold must lie strictly between 0 and 1"});
    if (curve.values.size() < 2) throw ValidationError({"cumulative curve needs at least two cells"});
    DoiEstimate est;
    est.tau = tau;
    est.curve = curve;
    const auto n = curve.values.size();
    est.max_reached = curve.values[n - 2];
    const auto it = std::find_if(curve.values.begin(), curve.values.end(), [tau](double v) { return v >= tau; });
    const auto c = static_cast<std::size_t>(it - curve.values.begin());
    // A crossing in the bottom cell means the grid cannot resolve it.
    est.reached = c + 1 < n;
    est.doi_m = curve.depths_m[std::min(c, n - 1)];
    return est;
}

DoiEstimate depth_of_investigation(const LayeredEarth& model, const Measurement& m, double tau,
                                   const DoiOptions& options)
{
    const auto profile = sensitivity_analytic(model, m, options.grid);
    return doi_from_curve(cumulative_response(profile, options.component), tau);
}

double calibrate_tau(const CumulativeCurve& curve, double target_m)
{
    if (curve.values.size() < 2) throw ValidationError({"cumulative curve needs at least two cells"});
    std::size_t best = 0;
    for (std::size_t c = 1; c < curve.depths_m.size(); ++c) {
        if (std::abs(curve.depths_m[c] - target_m) < std::abs(curve.depths_m[best] - target_m)) best = c;
    }
    const double lo = best == 0 ? 0.0 : curve.values[best - 1];
    return 0.5 * (lo + curve.values[best]);
}

}  // namespace fdem
