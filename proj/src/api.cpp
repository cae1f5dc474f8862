#include "fdem/api.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "fdem/csv.hpp"
#include "fdem/error.hpp"

namespace fdem::api {

namespace {

const json& field(const json& doc, const char* key)
{
    if (!doc.is_object()) throw SchemaError("request must be a JSON object");
    if (!doc.contains(key)) throw SchemaError(std::string("missing field \"") + key + "\"");
    return doc.at(key);
}

template <class T>
T get(const json& doc, const char* key)
{
    const auto& v = field(doc, key);
    try {
        return v.get<T>();
    } catch (const json::exception&) {
        throw SchemaError(std::string("field \"") + key + "\" has the wrong type");
    }
}

template <class T>
T get_or(const json& doc, const char* key, T fallback)
{
    if (!doc.is_object() || !doc.contains(key) || doc.at(key).is_null()) return fallback;
    return get<T>(doc, key);
}

bool has(const json& doc, const char* key) { return doc.is_object() && doc.contains(key) && !doc.at(key).is_null(); }

std::vector<double> number_list(const json& doc, const char* key)
{
    const auto& v = field(doc, key);
    if (v.is_number()) return {v.get<double>()};
    return get<std::vector<double>>(doc, key);
}

json response_rows(const ResponseSet& set, DeviceScale scale)
{
    json rows = json::array();
    for (std::size_t i = 0; i < set.values.size(); ++i) {
        const ForwardResponse r{set.geometry.at(i), set.values[i]};
        const auto d = to_device_units(r, scale);
        rows.push_back({{"orientation", std::string(to_string(r.measurement.orientation))},
                        {"spacing_m", r.measurement.spacing_m},
                        {"frequency_Hz", r.measurement.frequency_hz},
                        {"height_m", r.measurement.height_m},
                        {"Q_raw", r.quadrature()},
                        {"P_raw", r.in_phase()},
                        {"Q_mS_per_m", d.q_mS_per_m},
                        {"P_device_unit", d.p}});
    }
    return rows;
}

json units_json(DeviceScale s)
{
    return {{"Q", std::string(to_string(s.q))}, {"P", std::string(to_string(s.p))}};
}

json forward_document(const ForwardPlan& plan, const ResponseSet& set)
{
    json doc = {{"model", to_json(plan.model)},
                {"device", plan.geometry.device ? json(*plan.geometry.device) : json(nullptr)},
                {"units", units_json(plan.geometry.scale)},
                {"geometry", to_json(plan.geometry.geometry)},
                {"responses", response_rows(set, plan.geometry.scale)}};
    return doc;
}

int decimals(std::string_view text)
{
    const auto e = text.find_first_of("eE");
    const auto mant = text.substr(0, e);
    const auto dot = mant.find('.');
    int d = dot == std::string_view::npos ? 0 : static_cast<int>(mant.size() - dot - 1);
    if (e != std::string_view::npos) d -= static_cast<int>(parse_number(text.substr(e + 1)));
    return std::clamp(d, 0, 15);
}

JacobianMethod parse_jacobian(std::string_view tag)
{
    if (tag == "analytic") return JacobianMethod::Analytic;
    if (tag == "fd") return JacobianMethod::FiniteDifference;
    throw SchemaError("unknown jacobian method \"" + std::string(tag) + "\" (expected analytic or fd)");
}

std::string_view to_string(JacobianMethod m) noexcept
{
    return m == JacobianMethod::Analytic ? "analytic" : "fd";
}

SensitivityGrid grid_from(const json& request)
{
    SensitivityGrid g;
    g.cell_m = get_or<double>(request, "cell_m", g.cell_m);
    g.max_depth_m = get_or<double>(request, "max_depth_m", g.max_depth_m);
    if (!(g.cell_m > 0.0) || !(g.max_depth_m > g.cell_m))
        throw ValidationError({"sensitivity grid needs 0 < cell_m < max_depth_m"});
    return g;
}

json measurement_json(const Measurement& m)
{
    return {{"orientation", std::string(to_string(m.orientation))},
            {"spacing_m", m.spacing_m},
            {"frequency_Hz", m.frequency_hz},
            {"height_m", m.height_m}};
}

struct ProfileSet {
    std::vector<SensitivityProfile> profiles;
    std::vector<CumulativeCurve> curves;
    SensitivityComponent component = SensitivityComponent::SigmaQuadrature;
    std::string method;
};

ProfileSet profiles_for(const json& request, const DeviceCatalog& catalog)
{
    const auto model = resolve_model(field(request, "model"));
    const auto geo = resolve_geometry(request, catalog);
    const auto grid = grid_from(request);
    ProfileSet out;
    out.method = get_or<std::string>(request, "method", "analytic");
    if (out.method != "analytic" && out.method != "fd")
        throw SchemaError("unknown sensitivity method \"" + out.method + "\" (expected analytic or fd)");
    out.component = parse_component(get_or<std::string>(request, "component", "sigma_Q"));
    for (std::size_t i = 0; i < geo.geometry.size(); ++i) {
        const auto m = geo.geometry.at(i);
        out.profiles.push_back(out.method == "fd" ? sensitivity_fd(model, m, grid)
                                                  : sensitivity_analytic(model, m, grid));
        out.curves.push_back(cumulative_response(out.profiles.back(), out.component));
    }
    return out;
}

std::vector<double> re(const std::vector<cplx>& v)
{
    std::vector<double> out;
    for (const auto& c : v) out.push_back(c.real());
    return out;
}

std::vector<double> im(const std::vector<cplx>& v)
{
    std::vector<double> out;
    for (const auto& c : v) out.push_back(c.imag());
    return out;
}

std::vector<double> inversion_default_thickness() { return std::vector<double>(19, 0.25); }

}  // namespace

LayeredEarth builtin_model(std::string_view name)
{
    if (name == "M1") return {{0.1, 0.001, 0.01}, {1.0, 1.01, 1.005}, {1.5, 1.0}};
    if (name == "M2") return {{0.1, 2.0, 0.01}, {1.0, 1.01, 1.005}, {1.5, 1.0}};
    throw NotFoundError("unknown built-in model \"" + std::string(name) + "\" (expected M1 or M2)");
}

bool is_builtin_model(std::string_view name) { return name == "M1" || name == "M2"; }

LayeredEarth resolve_model(const json& ref)
{
    if (ref.is_string()) return builtin_model(ref.get<std::string>());
    return model_from_json(ref);
}

ResolvedGeometry resolve_geometry(const json& request, const DeviceCatalog& catalog,
                                  std::optional<std::vector<double>> default_heights)
{
    ResolvedGeometry out;
    if (has(request, "geometry")) {
        out.geometry = geometry_from_json(request.at("geometry"));
        if (has(request, "units")) {
            const auto& u = request.at("units");
            out.scale.q = parse_quadrature_unit(get<std::string>(u, "Q"));
            out.scale.p = parse_in_phase_unit(get<std::string>(u, "P"));
        }
        return out;
    }
    if (!has(request, "device")) throw SchemaError("request needs either \"device\" or \"geometry\"");
    const auto& entry = catalog.lookup(get<std::string>(request, "device"));
    std::vector<double> heights;
    if (has(request, "heights_m"))
        heights = number_list(request, "heights_m");
    else if (has(request, "height_m"))
        heights = number_list(request, "height_m");
    else if (default_heights)
        heights = *default_heights;
    else
        throw SchemaError("missing field \"heights_m\"");
    std::optional<std::vector<double>> freqs;
    if (has(request, "frequencies_Hz")) freqs = number_list(request, "frequencies_Hz");
    out.geometry = entry.geometry(std::move(heights), std::move(freqs));
    out.scale = entry.units;
    out.device = entry.name;
    return out;
}

std::vector<double> SweepRange::values() const
{
    if (log) return log_space(min, max, points);
    const auto n = static_cast<std::size_t>(std::floor((max - min) / step * (1.0 + 1e-12))) + 1;
    std::vector<double> out(n);
    const double scale = std::pow(10.0, static_cast<double>(decimals));
    for (std::size_t i = 0; i < n; ++i) {
        const double v = min + static_cast<double>(i) * step;
        out[i] = std::abs(v) * scale < 4.5e15 ? std::round(v * scale) / scale : v;
    }
    return out;
}

SweepRange parse_range(std::string_view text, std::size_t log_points)
{
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    for (;;) {
        const auto colon = text.find(':', start);
        parts.push_back(text.substr(start, colon == std::string_view::npos ? std::string_view::npos : colon - start));
        if (colon == std::string_view::npos) break;
        start = colon + 1;
    }
    if (parts.size() != 3) throw SchemaError("range must look like min:step:max or min:log:max");
    SweepRange r;
    r.min = parse_number(parts[0]);
    r.max = parse_number(parts[2]);
    if (!(r.min < r.max)) throw ValidationError({"empty sweep range: min must be below max"});
    if (parts[1] == "log") {
        r.log = true;
        r.points = log_points;
        if (!(r.min > 0.0)) throw ValidationError({"log sweeps need a positive minimum"});
        if (r.points < 2) throw ValidationError({"log sweeps need at least 2 points"});
    } else {
        r.step = parse_number(parts[1]);
        if (!(r.step > 0.0)) throw ValidationError({"sweep step must be positive"});
        // Snap the grid to the decimals written in the range so that
        // 0:0.05:3 yields 0.15 rather than 0.15000000000000002.
        r.decimals = std::max({decimals(parts[0]), decimals(parts[1]), decimals(parts[2])});
    }
    return r;
}

ForwardPlan plan_forward(const json& request, const DeviceCatalog& catalog)
{
    ForwardPlan plan{resolve_model(field(request, "model")), resolve_geometry(request, catalog)};
    return plan;
}

ForwardPlan plan_sweep(const json& request, const DeviceCatalog& catalog)
{
    const auto axis = get<std::string>(request, "axis");
    const auto points = get_or<std::size_t>(request, "points", 61);
    const auto range = parse_range(get<std::string>(request, "range"), points);
    const auto values = range.values();
    ForwardPlan plan;
    plan.model = resolve_model(field(request, "model"));
    if (axis == "height") {
        plan.geometry = resolve_geometry(request, catalog, std::vector<double>{0.0});
        plan.geometry.geometry.heights_m = values;
    } else if (axis == "frequency") {
        plan.geometry = resolve_geometry(request, catalog);
        plan.geometry.geometry.frequencies_hz = values;
    } else if (axis == "spacing") {
        plan.geometry = resolve_geometry(request, catalog);
        for (auto& row : plan.geometry.geometry.spacings_m) row = values;
    } else {
        throw SchemaError("unknown sweep axis \"" + axis + "\" (expected height, frequency or spacing)");
    }
    require_valid(plan.geometry.geometry);
    return plan;
}

json forward(const json& request, const DeviceCatalog& catalog)
{
    const auto plan = plan_forward(request, catalog);
    return forward_document(plan, response_batch(plan.model, plan.geometry.geometry));
}

json sweep(const json& request, const DeviceCatalog& catalog)
{
    const auto plan = plan_sweep(request, catalog);
    auto doc = forward_document(plan, response_batch(plan.model, plan.geometry.geometry));
    doc["axis"] = request.at("axis");
    return doc;
}

std::string forward_csv(const json& request, const DeviceCatalog& catalog)
{
    const auto plan = plan_forward(request, catalog);
    return response_csv(response_batch(plan.model, plan.geometry.geometry), plan.geometry.scale);
}

std::string sweep_csv(const json& request, const DeviceCatalog& catalog)
{
    const auto plan = plan_sweep(request, catalog);
    return response_csv(response_batch(plan.model, plan.geometry.geometry), plan.geometry.scale);
}

json diagnostics(const json& request, const DeviceCatalog& catalog)
{
    const auto kind = get<std::string>(request, "kind");
    json doc = {{"kind", kind}};
    if (kind == "skin") {
        const auto model = resolve_model(field(request, "model"));
        const double cell = get_or<double>(request, "cell_m", kSkinDepthCell);
        std::vector<double> freqs;
        if (has(request, "frequencies_Hz"))
            freqs = number_list(request, "frequencies_Hz");
        else if (has(request, "frequency_Hz"))
            freqs = number_list(request, "frequency_Hz");
        else if (has(request, "device"))
            freqs = catalog.lookup(get<std::string>(request, "device")).frequencies();
        else
            throw SchemaError("skin depth needs \"frequencies_Hz\" or \"device\"");
        json rows = json::array();
        for (double f : freqs) rows.push_back({{"frequency_Hz", f}, {"skin_depth_m", survey_skin_depth(model, f, cell)}});
        doc["cell_m"] = cell;
        doc["rows"] = rows;
        return doc;
    }
    if (kind == "beta") {
        const auto model = resolve_model(field(request, "model"));
        const double cell = get_or<double>(request, "cell_m", kSkinDepthCell);
        const auto geo = resolve_geometry(request, catalog, std::vector<double>{0.0});
        std::map<double, double> delta;
        for (double f : geo.geometry.frequencies_hz) delta[f] = survey_skin_depth(model, f, cell);
        json rows = json::array();
        const auto& g = geo.geometry;
        for (std::size_t o = 0; o < g.orientations.size(); ++o) {
            for (double s : g.spacings_m[o]) {
                for (double f : g.frequencies_hz) {
                    rows.push_back({{"orientation", std::string(to_string(g.orientations[o]))},
                                    {"spacing_m", s},
                                    {"frequency_Hz", f},
                                    {"skin_depth_m", delta[f]},
                                    {"beta", induction_number(s, delta[f])}});
                }
            }
        }
        doc["cell_m"] = cell;
        doc["device"] = geo.device ? json(*geo.device) : json(nullptr);
        doc["rows"] = rows;
        return doc;
    }
    if (kind == "sensitivity" || kind == "cumulative") {
        const auto set = profiles_for(request, catalog);
        json profiles = json::array();
        for (std::size_t i = 0; i < set.profiles.size(); ++i) {
            const auto& p = set.profiles[i];
            json entry = {{"measurement", measurement_json(p.measurement)}, {"depth_m", p.depths_m}};
            if (kind == "sensitivity") {
                entry["Re_S_sigma"] = re(p.s_sigma);
                entry["Im_S_sigma"] = im(p.s_sigma);
                entry["Re_S_mu"] = re(p.s_mu);
                entry["Im_S_mu"] = im(p.s_mu);
                entry["basement"] = {{"Re_S_sigma", p.basement_sigma.real()},
                                     {"Im_S_sigma", p.basement_sigma.imag()},
                                     {"Re_S_mu", p.basement_mu.real()},
                                     {"Im_S_mu", p.basement_mu.imag()}};
            }
            entry["cumulative_depth_m"] = set.curves[i].depths_m;
            entry["cumulative"] = set.curves[i].values;
            profiles.push_back(std::move(entry));
        }
        doc["method"] = set.method;
        doc["component"] = std::string(to_string(set.component));
        doc["cell_m"] = set.profiles.empty() ? 0.0 : set.profiles.front().cell_m;
        doc["profiles"] = profiles;
        return doc;
    }
    throw SchemaError("unknown diagnostics kind \"" + kind + "\" (expected skin, beta, sensitivity or cumulative)");
}

std::string diagnostics_csv(const json& request, const DeviceCatalog& catalog)
{
    const auto kind = get<std::string>(request, "kind");
    if (kind == "sensitivity" || kind == "cumulative") {
        const auto set = profiles_for(request, catalog);
        if (set.profiles.size() == 1) return sensitivity_csv(set.profiles.front(), set.curves.front());
        CsvTable t;
        t.header = {"orientation", "spacing_m", "frequency_Hz", "height_m"};
        t.header.insert(t.header.end(), kSensitivityColumns.begin(), kSensitivityColumns.end());
        for (std::size_t i = 0; i < set.profiles.size(); ++i) {
            const auto& m = set.profiles[i].measurement;
            const auto inner = sensitivity_table(set.profiles[i], set.curves[i]);
            for (const auto& r : inner.rows) {
                std::vector<std::string> row = {std::string(to_string(m.orientation)), format_number(m.spacing_m),
                                                format_number(m.frequency_hz), format_number(m.height_m)};
                row.insert(row.end(), r.begin(), r.end());
                t.add_row(std::move(row));
            }
        }
        return t.str();
    }
    const auto doc = diagnostics(request, catalog);
    CsvTable t;
    if (kind == "skin") {
        t.header = {"frequency_Hz", "skin_depth_m"};
        for (const auto& r : doc.at("rows"))
            t.add_row({format_number(r.at("frequency_Hz").get<double>()),
                       format_number(r.at("skin_depth_m").get<double>())});
    } else {
        t.header = {"orientation", "spacing_m", "frequency_Hz", "skin_depth_m", "beta"};
        for (const auto& r : doc.at("rows"))
            t.add_row({r.at("orientation").get<std::string>(), format_number(r.at("spacing_m").get<double>()),
                       format_number(r.at("frequency_Hz").get<double>()),
                       format_number(r.at("skin_depth_m").get<double>()), format_number(r.at("beta").get<double>())});
    }
    return t.str();
}

json doi(const json& request, const DeviceCatalog& catalog)
{
    const auto model = resolve_model(field(request, "model"));
    const auto geo = resolve_geometry(request, catalog);
    DoiOptions opts;
    opts.grid = grid_from(request);
    opts.component = parse_component(get_or<std::string>(request, "component", "sigma_Q"));

    double tau = get_or<double>(request, "tau", kDefaultDoiThreshold);
    json calibration = nullptr;
    if (has(request, "calibrate")) {
        const auto& c = request.at("calibrate");
        const auto target = get<double>(c, "target_m");
        Measurement m;
        m.orientation = parse_orientation(get<std::string>(c, "orientation"));
        m.spacing_m = get<double>(c, "spacing_m");
        m.frequency_hz = get_or<double>(c, "frequency_Hz", geo.geometry.frequencies_hz.front());
        m.height_m = get_or<double>(c, "height_m", geo.geometry.heights_m.front());
        const auto ref_model = has(c, "model") ? resolve_model(c.at("model")) : model;
        const auto curve = cumulative_response(sensitivity_analytic(ref_model, m, opts.grid), opts.component);
        tau = calibrate_tau(curve, target);
        calibration = {{"measurement", measurement_json(m)}, {"target_m", target}, {"tau", tau}};
    }

    json rows = json::array();
    for (std::size_t i = 0; i < geo.geometry.size(); ++i) {
        const auto m = geo.geometry.at(i);
        const auto est = depth_of_investigation(model, m, tau, opts);
        json row = measurement_json(m);
        row["doi_m"] = est.doi_m;
        row["reached"] = est.reached;
        row["max_reached"] = est.max_reached;
        rows.push_back(std::move(row));
    }
    return {{"tau", tau},
            {"component", std::string(to_string(opts.component))},
            {"cell_m", opts.grid.cell_m},
            {"max_depth_m", opts.grid.max_depth_m},
            {"calibration", calibration},
            {"device", geo.device ? json(*geo.device) : json(nullptr)},
            {"rows", rows}};
}

InversionOptions options_from_json(const json& doc)
{
    InversionOptions o;
    if (doc.is_null()) return o;
    if (!doc.is_object()) throw SchemaError("inversion options must be a JSON object");
    if (has(doc, "method")) o.method = parse_method(get<std::string>(doc, "method"));
    if (has(doc, "component")) o.component = parse_data_component(get<std::string>(doc, "component"));
    if (has(doc, "mode")) o.mode = parse_mode(get<std::string>(doc, "mode"));
    if (has(doc, "regularizer")) o.regularizer = parse_regularizer(get<std::string>(doc, "regularizer"));
    if (has(doc, "jacobian")) o.jacobian = parse_jacobian(get<std::string>(doc, "jacobian"));
    if (has(doc, "rank")) o.fixed_rank = get<std::size_t>(doc, "rank");
    o.noise_level = get_or<double>(doc, "noise_level", o.noise_level);
    o.safety = get_or<double>(doc, "safety", o.safety);
    o.max_iterations = get_or<std::size_t>(doc, "max_iterations", o.max_iterations);
    o.step_tolerance = get_or<double>(doc, "step_tolerance", o.step_tolerance);
    o.residual_tolerance = get_or<double>(doc, "residual_tolerance", o.residual_tolerance);
    o.profile = get_or<std::vector<double>>(doc, "profile", o.profile);
    o.check_projector = get_or<bool>(doc, "check_projector", o.check_projector);

    std::vector<std::string> issues;
    if (!(o.noise_level >= 0.0)) issues.emplace_back("noise_level must be non-negative");
    if (!(o.safety >= 1.0)) issues.emplace_back("safety must be at least 1");
    if (!(o.step_tolerance >= 0.0)) issues.emplace_back("step_tolerance must be non-negative");
    if (!(o.residual_tolerance >= 0.0)) issues.emplace_back("residual_tolerance must be non-negative");
    if (o.fixed_rank && *o.fixed_rank == 0) issues.emplace_back("rank must be positive");
    if (!issues.empty()) throw ValidationError(std::move(issues));
    return o;
}

json to_json(const InversionOptions& o)
{
    return {{"method", std::string(to_string(o.method))},
            {"component", std::string(to_string(o.component))},
            {"mode", std::string(to_string(o.mode))},
            {"regularizer", std::string(to_string(o.regularizer))},
            {"jacobian", std::string(to_string(o.jacobian))},
            {"rank", o.fixed_rank ? json(*o.fixed_rank) : json(nullptr)},
            {"noise_level", o.noise_level},
            {"safety", o.safety},
            {"max_iterations", o.max_iterations},
            {"step_tolerance", o.step_tolerance},
            {"residual_tolerance", o.residual_tolerance},
            {"profile", o.profile},
            {"check_projector", o.check_projector}};
}

ResponseSet data_from_json(const json& doc)
{
    ResponseSet set;
    set.geometry = geometry_from_json(field(doc, "geometry"));
    const auto q = get<std::vector<double>>(doc, "Q_raw");
    const auto p = get<std::vector<double>>(doc, "P_raw");
    if (q.size() != set.geometry.size() || p.size() != set.geometry.size())
        throw ValidationError({"Q_raw and P_raw must each hold one value per measurement"});
    for (std::size_t i = 0; i < q.size(); ++i) set.values.emplace_back(p[i], q[i]);
    return set;
}

json to_json(const ResponseSet& data)
{
    return {{"geometry", to_json(data.geometry)}, {"Q_raw", im(data.values)}, {"P_raw", re(data.values)}};
}

json invert(const json& request)
{
    ResponseSet data;
    if (has(request, "data_csv"))
        data = read_response_csv(get<std::string>(request, "data_csv"));
    else
        data = data_from_json(field(request, "data"));
    const auto opts = options_from_json(has(request, "options") ? request.at("options") : json(nullptr));
    LayeredEarth start;
    if (has(request, "start")) {
        start = resolve_model(request.at("start"));
    } else {
        const auto th = has(request, "thickness_m") ? get<std::vector<double>>(request, "thickness_m")
                                                    : inversion_default_thickness();
        start = default_start(data, th);
    }
    if (!opts.profile.empty() && opts.profile.size() != start.layers())
        throw ValidationError({"profile must hold one value per layer"});

    const auto res = fdem::invert(data, start, opts);
    json iterations = json::array();
    for (std::size_t k = 0; k < res.iterations.size(); ++k) {
        const auto& it = res.iterations[k];
        json rec = {{"iteration", k + 1},
                    {"residual", it.residual},
                    {"relative_residual", res.data_norm > 0.0 ? it.residual / res.data_norm : it.residual},
                    {"step_norm", it.step_norm},
                    {"rank", it.rank},
                    {"alpha", it.alpha},
                    {"beta", it.beta}};
        if (opts.check_projector) {
            rec["projector_idempotence"] = it.projector_idempotence;
            rec["projector_symmetry"] = it.projector_symmetry;
            rec["projector_annihilation"] = it.projector_annihilation;
        }
        iterations.push_back(std::move(rec));
    }
    std::vector<double> x(res.x.data(), res.x.data() + res.x.size());
    return {{"options", to_json(opts)},
            {"start", to_json(start)},
            {"data_norm", res.data_norm},
            {"initial_residual", res.initial_residual},
            {"iterations", iterations},
            {"model", to_json(res.model)},
            {"x", x},
            {"converged", res.converged},
            {"reason", res.reason},
            {"warnings", res.warnings},
            {"stationarity", res.stationarity}};
}

ResponseSet synthesize(const json& request, const DeviceCatalog& catalog)
{
    const auto plan = plan_forward(request, catalog);
    const auto clean = response_batch(plan.model, plan.geometry.geometry);
    return add_noise(clean, get_or<double>(request, "noise", 0.0), get_or<std::uint64_t>(request, "seed", 0));
}

std::string synthesize_csv(const json& request, const DeviceCatalog& catalog)
{
    const auto plan = plan_forward(request, catalog);
    return response_csv(synthesize(request, catalog), plan.geometry.scale);
}

json devices(const DeviceCatalog& catalog) { return catalog.to_json(); }

json error_json(const std::exception& e)
{
    std::string type = "error";
    json issues = json::array();
    if (dynamic_cast<const SchemaError*>(&e)) {
        type = "schema";
    } else if (const auto* v = dynamic_cast<const ValidationError*>(&e)) {
        type = "validation";
        issues = v->issues();
    } else if (dynamic_cast<const NotFoundError*>(&e)) {
        type = "not_found";
    } else if (dynamic_cast<const QuadratureError*>(&e)) {
        type = "numerical";
    } else if (dynamic_cast<const json::exception*>(&e)) {
        type = "schema";
    }
    return {{"error", {{"type", type}, {"message", e.what()}, {"issues", issues}}}};
}

std::string render(const json& doc) { return doc.dump(2) + "\n"; }

}  // namespace fdem::api
