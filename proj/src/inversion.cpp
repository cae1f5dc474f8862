#include "fdem/inversion.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <random>
#include <thread>

#include "fdem/error.hpp"
#include "fdem/forward.hpp"

namespace fdem {

Method parse_method(std::string_view tag)
{
    if (tag == "GN") return Method::GN;
    if (tag == "MNGN") return Method::MNGN;
    if (tag == "MNGN2_A") return Method::MNGN2_A;
    if (tag == "MNGN2_AB") return Method::MNGN2_AB;
    if (tag == "MNGN2_ABD") return Method::MNGN2_ABD;
    throw SchemaError("unknown method \"" + std::string(tag) + "\"");
}

std::string_view to_string(Method m) noexcept
{
    switch (m) {
    case Method::GN: return "GN";
    case Method::MNGN: return "MNGN";
    case Method::MNGN2_A: return "MNGN2_A";
    case Method::MNGN2_AB: return "MNGN2_AB";
    case Method::MNGN2_ABD: return "MNGN2_ABD";
    }
    return "?";
}

DataComponent parse_data_component(std::string_view tag)
{
    if (tag == "Q") return DataComponent::Quadrature;
    if (tag == "P") return DataComponent::InPhase;
    if (tag == "complex") return DataComponent::Complex;
    throw SchemaError("unknown data component \"" + std::string(tag) + "\"");
}

std::string_view to_string(DataComponent c) noexcept
{
    switch (c) {
    case DataComponent::Quadrature: return "Q";
    case DataComponent::InPhase: return "P";
    case DataComponent::Complex: return "complex";
    }
    return "?";
}

InversionMode parse_mode(std::string_view tag)
{
    if (tag == "sigma") return InversionMode::Sigma;
    if (tag == "mu") return InversionMode::Mu;
    throw SchemaError("unknown inversion mode \"" + std::string(tag) + "\"");
}

std::string_view to_string(InversionMode m) noexcept
{
    return m == InversionMode::Sigma ? "sigma" : "mu";
}

Vector realify(const std::vector<cplx>& values, DataComponent component)
{
    const auto m = static_cast<Eigen::Index>(values.size());
    Vector out(component == DataComponent::Complex ? 2 * m : m);
    for (Eigen::Index i = 0; i < m; ++i) {
        const auto& v = values[static_cast<std::size_t>(i)];
        switch (component) {
        case DataComponent::Quadrature: out(i) = v.imag(); break;
        case DataComponent::InPhase: out(i) = v.real(); break;
        case DataComponent::Complex:
            out(i) = v.real();
            out(m + i) = v.imag();
            break;
        }
    }
    return out;
}

Vector model_vector(const LayeredEarth& model, InversionMode mode)
{
    const auto& src = mode == InversionMode::Sigma ? model.sigma : model.mu_r;
    return Eigen::Map<const Vector>(src.data(), static_cast<Eigen::Index>(src.size()));
}

LayeredEarth apply_model_vector(const LayeredEarth& base, const Vector& x, InversionMode mode)
{
    if (static_cast<std::size_t>(x.size()) != base.layers())
        throw ValidationError({"model vector length must equal the number of layers"});
    LayeredEarth out = base;
    auto& dst = mode == InversionMode::Sigma ? out.sigma : out.mu_r;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        if (!std::isfinite(x(i))) throw ValidationError({"model vector entries must be finite"});
        dst[static_cast<std::size_t>(i)] = x(i);
    }
    return out;
}

Vector residual(const LayeredEarth& model, const ResponseSet& data, DataComponent component)
{
    const auto pred = response_batch_unchecked(model, data.geometry);
    if (pred.values.size() != data.values.size()) throw ValidationError({"data length must match its geometry"});
    std::vector<cplx> diff(pred.values.size());
    for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = pred.values[i] - data.values[i];
    return realify(diff, component);
}

Matrix jacobian(const LayeredEarth& model, const MeasurementGeometry& geometry, InversionMode mode,
                DataComponent component, JacobianMethod method)
{
    const auto m = static_cast<Eigen::Index>(geometry.size());
    const auto n = static_cast<Eigen::Index>(model.layers());
    const Eigen::Index rows = component == DataComponent::Complex ? 2 * m : m;
    Matrix J(rows, n);

    auto place = [&](Eigen::Index i, Eigen::Index j, cplx d) {
        switch (component) {
        case DataComponent::Quadrature: J(i, j) = d.imag(); break;
        case DataComponent::InPhase: J(i, j) = d.real(); break;
        case DataComponent::Complex:
            J(i, j) = d.real();
            J(m + i, j) = d.imag();
            break;
        }
    };

    if (method == JacobianMethod::Analytic) {
        for (Eigen::Index i = 0; i < m; ++i) {
            const auto d = response_derivatives_unchecked(model, geometry.at(static_cast<std::size_t>(i)));
            for (Eigen::Index j = 0; j < n; ++j) {
                const auto k = static_cast<std::size_t>(j);
                place(i, j, mode == InversionMode::Sigma ? d.d_sigma[k] : d.d_mu[k] * kMu0);
            }
        }
        return J;
    }

    const Vector x = model_vector(model, mode);
    for (Eigen::Index j = 0; j < n; ++j) {
        const double h = std::max(1e-6 * std::abs(x(j)), 1e-9);
        Vector xp = x;
        Vector xm = x;
        xp(j) += h;
        xm(j) -= h;
        const auto rp = response_batch_unchecked(apply_model_vector(model, xp, mode), geometry);
        const auto rm = response_batch_unchecked(apply_model_vector(model, xm, mode), geometry);
        for (Eigen::Index i = 0; i < m; ++i) {
            const auto k = static_cast<std::size_t>(i);
            place(i, j, (rp.values[k] - rm.values[k]) / (xp(j) - xm(j)));
        }
    }
    return J;
}

std::vector<double> InversionResult::residual_history() const
{
    std::vector<double> out;
    for (const auto& it : iterations) out.push_back(it.residual);
    return out;
}

std::vector<double> InversionResult::step_history() const
{
    std::vector<double> out;
    for (const auto& it : iterations) out.push_back(it.step_norm);
    return out;
}

std::vector<std::size_t> InversionResult::rank_history() const
{
    std::vector<std::size_t> out;
    for (const auto& it : iterations) out.push_back(it.rank);
    return out;
}

namespace {

constexpr double kArmijo = 1e-4;
constexpr int kMaxHalvings = 30;
constexpr double kBetaMin = 1.0 / 1024.0;

struct Trial {
    bool ok = false;
    Vector x;
    Vector r;
    double norm = 0.0;
};

struct Projection {
    Matrix P;
    Matrix metric;  // inner product in which P is symmetric
    Matrix truncated_J;
};

Projection make_projection(const Matrix& J, const Matrix& L, bool identity_l, std::size_t rank)
{
    Projection out;
    const auto n = J.cols();
    if (identity_l) {
        Eigen::JacobiSVD<Matrix> svd(J, Eigen::ComputeThinU | Eigen::ComputeFullV);
        const auto& s = svd.singularValues();
        const auto k = static_cast<Eigen::Index>(std::min<std::size_t>(rank, static_cast<std::size_t>(s.size())));
        out.P = truncated_null_projector(J, rank);
        out.metric = Matrix::Identity(n, n);
        out.truncated_J = svd.matrixU().leftCols(k) * s.head(k).asDiagonal() * svd.matrixV().leftCols(k).transpose();
        return out;
    }
    const auto g = gsvd(J, L);
    out.P = gsvd_null_projector(J, L, rank);
    out.metric = g.R.transpose() * g.R;
    const auto kept = static_cast<Eigen::Index>(g.null_l + rank);
    const auto keep = std::min(kept, n);
    out.truncated_J = g.U.leftCols(keep) * g.c.head(keep).asDiagonal() * g.Xinv.topRows(keep);
    return out;
}

}  // namespace

InversionResult solve(const LeastSquaresProblem& problem, const Vector& x0, const InversionOptions& opts)
{
    const auto n = x0.size();
    if (!(opts.step_tolerance > 0.0) || !(opts.residual_tolerance > 0.0))
        throw ValidationError({"tolerances must be positive"});
    if (!(opts.noise_level >= 0.0)) throw ValidationError({"noise level must be non-negative"});
    Vector xbar = Vector::Zero(n);
    if (!opts.profile.empty()) {
        if (static_cast<Eigen::Index>(opts.profile.size()) != n)
            throw ValidationError({"model profile length must equal the number of unknowns"});
        xbar = Eigen::Map<const Vector>(opts.profile.data(), n);
    }
    const bool identity_l = opts.regularizer == RegularizerKind::Identity;
    const Matrix L = regularization_matrix(opts.regularizer, static_cast<std::size_t>(n));
    const bool minimal_norm = opts.method != Method::GN;

    InversionResult res;
    res.data_norm = problem.data_norm;
    Vector x = x0;
    Vector r = problem.residual(x);
    if (opts.fixed_rank && *opts.fixed_rank > std::min<std::size_t>(static_cast<std::size_t>(r.size()),
                                                                     static_cast<std::size_t>(n)))
        throw ValidationError({"fixed rank exceeds min(rows, unknowns)"});
    double f = r.norm();
    res.initial_residual = f;

    auto warn = [&res](const std::string& w) {
        if (std::find(res.warnings.begin(), res.warnings.end(), w) == res.warnings.end()) res.warnings.push_back(w);
    };

    auto evaluate = [&](const Vector& xt) {
        Trial t;
        t.x = xt;
        try {
            t.r = problem.residual(xt);
            t.norm = t.r.norm();
            t.ok = std::isfinite(t.norm);
        } catch (const Error&) {
            t.ok = false;
        }
        return t;
    };

    std::size_t last_rank = 0;
    bool have_rank = false;
    double beta_state = 1.0;
    res.reason = "max_iterations";

    for (std::size_t k = 0;; ++k) {
        if (f <= opts.residual_tolerance * problem.data_norm) {
            res.converged = true;
            res.reason = "residual_tolerance";
            break;
        }
        if (opts.noise_level > 0.0 && f <= opts.safety * opts.noise_level * problem.data_norm) {
            res.converged = true;
            res.reason = "discrepancy";
            break;
        }
        if (k >= opts.max_iterations) break;

        const Matrix J = problem.jacobian(x);
        std::size_t rank = 0;
        if (opts.fixed_rank) {
            rank = *opts.fixed_rank;
        } else {
            const auto choice = identity_l
                                    ? discrepancy_rank(J, r, opts.noise_level, problem.data_norm, opts.safety)
                                    : discrepancy_rank(J, r, L, opts.noise_level, problem.data_norm, opts.safety);
            if (choice.fallback) warn("no truncation met the discrepancy target; the largest rank was used");
            rank = choice.rank;
        }
        const auto step = identity_l ? tsvd_step(J, r, rank) : tgsvd_step(J, r, L, rank);
        if (step.clamped) warn("requested rank exceeds the numerical rank and was clamped");
        rank = step.rank;
        last_rank = rank;
        have_rank = true;
        const Vector& q = step.q;

        Vector pr = Vector::Zero(n);
        Projection proj;
        if (minimal_norm) {
            proj = make_projection(J, L, identity_l, rank);
            pr = proj.P * (x - xbar);
        }

        const double slope = r.dot(J * q);  // derivative of ||r||^2 / 2 along q
        auto acceptable = [&](const Trial& t, double alpha) {
            if (!t.ok) return false;
            if (slope < 0.0) return t.norm * t.norm <= f * f + 2.0 * kArmijo * alpha * slope;
            return t.norm < f;
        };

        Trial accepted;
        double alpha = 1.0;
        double beta = 0.0;
        bool found = false;
        switch (opts.method) {
        case Method::GN:
        case Method::MNGN:
        case Method::MNGN2_A:
            for (int h = 0; h <= kMaxHalvings; ++h, alpha *= 0.5) {
                Vector xt = x + alpha * q;
                if (opts.method == Method::MNGN) xt -= pr;
                if (opts.method == Method::MNGN2_A) xt -= alpha * pr;
                auto t = evaluate(xt);
                if (acceptable(t, alpha)) {
                    accepted = std::move(t);
                    found = true;
                    break;
                }
            }
            beta = opts.method == Method::MNGN ? 1.0 : (opts.method == Method::MNGN2_A ? alpha : 0.0);
            break;
        case Method::MNGN2_AB:
        case Method::MNGN2_ABD: {
            for (int h = 0; h <= kMaxHalvings; ++h, alpha *= 0.5) {
                auto t = evaluate(x + alpha * q);
                if (acceptable(t, alpha)) {
                    accepted = std::move(t);
                    found = true;
                    break;
                }
            }
            if (!found) break;
            const double beta0 = opts.method == Method::MNGN2_AB ? 1.0 : beta_state;
            beta = beta0;
            bool with_projection = false;
            for (int h = 0; h <= kMaxHalvings; ++h, beta *= 0.5) {
                auto t = evaluate(x + alpha * q - beta * pr);
                if (acceptable(t, alpha)) {
                    accepted = std::move(t);
                    with_projection = true;
                    break;
                }
            }
            if (!with_projection) beta = 0.0;
            if (opts.method == Method::MNGN2_ABD) {
                // Grow beta when the proposal passed the decrease test as is,
                // shrink it when it had to be cut back.
                const bool good = with_projection && beta == beta0;
                beta_state = std::clamp(good ? 2.0 * beta0 : 0.5 * beta0, kBetaMin, 1.0);
            }
            break;
        }
        }

        if (!found) {
            res.reason = "line_search";
            break;
        }

        IterationRecord rec;
        rec.residual = accepted.norm;
        rec.step_norm = (accepted.x - x).norm();
        rec.rank = rank;
        rec.alpha = alpha;
        rec.beta = beta;
        if (opts.check_projector && minimal_norm) {
            const Matrix& P = proj.P;
            const Matrix MP = proj.metric * P;
            rec.projector_idempotence = (P * P - P).norm() / std::max(1.0, P.norm());
            rec.projector_symmetry = (MP - MP.transpose()).norm() / std::max(1.0, MP.norm());
            rec.projector_annihilation = (proj.truncated_J * P).norm() / std::max(J.norm(), 1e-300);
        }
        res.iterations.push_back(rec);

        const double xnorm = x.norm();
        x = accepted.x;
        r = accepted.r;
        f = accepted.norm;
        if (rec.step_norm <= opts.step_tolerance * std::max(xnorm, std::numeric_limits<double>::min())) {
            res.converged = true;
            res.reason = "step_tolerance";
            break;
        }
    }

    res.x = x;
    if (x.norm() > 0.0) {
        try {
            const Matrix J = problem.jacobian(x);
            std::size_t rank = last_rank;
            if (!have_rank) {
                rank = opts.fixed_rank ? *opts.fixed_rank
                       : identity_l    ? discrepancy_rank(J, r, opts.noise_level, problem.data_norm, opts.safety).rank
                                       : discrepancy_rank(J, r, L, opts.noise_level, problem.data_norm, opts.safety).rank;
            }
            const auto proj = make_projection(J, L, identity_l, rank);
            res.stationarity = (proj.P * (x - xbar)).norm() / x.norm();
        } catch (const Error& e) {
            warn(std::string("stationarity not evaluated: ") + e.what());
            res.stationarity = std::numeric_limits<double>::quiet_NaN();
        }
    }
    return res;
}

LayeredEarth default_start(const ResponseSet& data, const std::vector<double>& thickness)
{
    double acc = 0.0;
    for (std::size_t i = 0; i < data.values.size(); ++i) {
        const auto m = data.geometry.at(i);
        acc += apparent_conductivity(data.values[i].imag(), m.frequency_hz, m.spacing_m);
    }
    double sigma = data.values.empty() ? 0.0 : acc / static_cast<double>(data.values.size());
    if (!(sigma > 0.0)) sigma = 1e-3;
    const auto n = thickness.size() + 1;
    LayeredEarth out{std::vector<double>(n, sigma), std::vector<double>(n, 1.0), thickness};
    require_valid(out);
    return out;
}

namespace {

InversionResult run_em(const ResponseSet& data, const LayeredEarth& start, const InversionOptions& opts)
{
    require_valid(start);
    require_valid(data.geometry);
    if (data.values.size() != data.geometry.size()) throw ValidationError({"data length must match its geometry"});
    const double data_norm = realify(data.values, opts.component).norm();
    LeastSquaresProblem problem;
    problem.data_norm = data_norm;
    problem.residual = [&](const Vector& x) {
        return residual(apply_model_vector(start, x, opts.mode), data, opts.component);
    };
    problem.jacobian = [&](const Vector& x) {
        return jacobian(apply_model_vector(start, x, opts.mode), data.geometry, opts.mode, opts.component,
                        opts.jacobian);
    };
    auto res = solve(problem, model_vector(start, opts.mode), opts);
    res.model = apply_model_vector(start, res.x, opts.mode);
    for (std::size_t k = 0; k < res.model.layers(); ++k) {
        if (res.model.sigma[k] < 0.0 || res.model.mu_r[k] <= 0.0) {
            res.warnings.emplace_back("final model leaves the physical range (negative conductivity or "
                                      "non-positive permeability)");
            break;
        }
    }
    return res;
}

}  // namespace

InversionResult gauss_newton(const ResponseSet& data, const LayeredEarth& start, const InversionOptions& opts)
{
    auto o = opts;
    o.method = Method::GN;
    return run_em(data, start, o);
}

InversionResult mngn_iterate(const ResponseSet& data, const LayeredEarth& start, const InversionOptions& opts)
{
    if (opts.method == Method::GN) throw ValidationError({"mngn_iterate needs one of the minimal-norm methods"});
    return run_em(data, start, opts);
}

InversionResult invert(const ResponseSet& data, const LayeredEarth& start, const InversionOptions& opts)
{
    return run_em(data, start, opts);
}

ResponseSet add_noise(const ResponseSet& data, double level, std::uint64_t seed)
{
    if (!(level >= 0.0)) throw ValidationError({"noise level must be non-negative"});
    ResponseSet out = data;
    const auto m = data.values.size();
    if (level == 0.0 || m == 0) return out;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> w(2 * m);
    for (auto& v : w) v = normal(rng);
    double wn = 0.0;
    double bn = 0.0;
    for (double v : w) wn += v * v;
    for (const auto& b : data.values) bn += std::norm(b);
    wn = std::sqrt(wn);
    bn = std::sqrt(bn);
    const double scale = level * bn / wn;
    for (std::size_t i = 0; i < m; ++i) out.values[i] += scale * cplx(w[i], w[m + i]);
    return out;
}

std::vector<SectionEntry> invert_section(const std::vector<ResponseSet>& columns, const LayeredEarth& start,
                                         const InversionOptions& opts)
{
    std::vector<SectionEntry> out(columns.size());
    for (std::size_t i = 1; i < columns.size(); ++i) {
        if (!(columns[i].geometry == columns.front().geometry))
            throw ValidationError({"all section columns must share one geometry"});
    }
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < columns.size(); i = next++) {
            try {
                out[i].result = invert(columns[i], start, opts);
            } catch (const std::exception& e) {
                out[i].error = e.what();
            }
        }
    };
    const auto threads = std::min<std::size_t>(std::max(1u, std::thread::hardware_concurrency()), columns.size());
    {
        std::vector<std::jthread> pool;
        for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
        worker();
    }
    return out;
}

}  // namespace fdem
