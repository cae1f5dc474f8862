#include "fdem/earth_model.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "fdem/error.hpp"

namespace fdem {

ValidationError::ValidationError(std::vector<std::string> issues)
    : Error([&] {
          std::string msg = "invalid input";
          for (const auto& s : issues) msg += "; " + s;
          return msg;
      }()),
      issues_(std::move(issues))
{
}

QuadratureError::QuadratureError(std::size_t node, double lambda)
    : Error("non-finite kernel value at filter node " + std::to_string(node) + " (lambda=" +
            std::to_string(lambda) + ")"),
      node_(node),
      lambda_(lambda)
{
}

std::vector<double> LayeredEarth::depths() const
{
    std::vector<double> z(layers(), 0.0);
    for (std::size_t k = 1; k < z.size(); ++k) z[k] = z[k - 1] + thickness.at(k - 1);
    return z;
}

LayeredEarth LayeredEarth::homogeneous(double sigma, double mu_r)
{
    return LayeredEarth{{sigma}, {mu_r}, {}};
}

std::vector<std::string> validate(const LayeredEarth& model)
{
    std::vector<std::string> issues;
    const auto n = model.sigma.size();
    if (n == 0) issues.emplace_back("model must have at least one layer");
    if (model.mu_r.size() != n) issues.emplace_back("mu_r must have one entry per layer");
    if (n > 0 && model.thickness.size() != n - 1)
        issues.emplace_back("thickness must have one entry fewer than the number of layers");
    for (double s : model.sigma) {
        if (!std::isfinite(s) || s < 0.0) {
            issues.emplace_back("conductivity must be finite and non-negative");
            break;
        }
    }
    for (double m : model.mu_r) {
        if (!std::isfinite(m) || m <= 0.0) {
            issues.emplace_back("relative permeability must be finite and positive");
            break;
        }
    }
    for (double d : model.thickness) {
        if (!std::isfinite(d) || d <= 0.0) {
            issues.emplace_back("thickness must be positive");
            break;
        }
    }
    return issues;
}

void require_valid(const LayeredEarth& model)
{
    auto issues = validate(model);
    if (!issues.empty()) throw ValidationError(std::move(issues));
}

LayeredEarth discretize(const LayeredEarth& model, double cell, double max_depth)
{
    require_valid(model);
    if (!(cell > 0.0) || !(max_depth >= cell))
        throw ValidationError({"discretization needs cell > 0 and max_depth >= cell"});

    const auto cells = static_cast<std::size_t>(std::llround(max_depth / cell));
    const auto z = model.depths();
    const double tie = 1e-9 * cell;

    auto layer_at = [&](double depth) {
        std::size_t k = 0;
        while (k + 1 < z.size() && depth > z[k + 1] + tie) ++k;
        return k;
    };

    LayeredEarth out;
    out.sigma.reserve(cells + 1);
    out.mu_r.reserve(cells + 1);
    for (std::size_t c = 0; c < cells; ++c) {
        const auto k = layer_at((static_cast<double>(c) + 0.5) * cell);
        out.sigma.push_back(model.sigma[k]);
        out.mu_r.push_back(model.mu_r[k]);
        out.thickness.push_back(cell);
    }
    // Strictly below the grid bottom.
    const auto k = layer_at(static_cast<double>(cells) * cell + 2.0 * tie);
    out.sigma.push_back(model.sigma[k]);
    out.mu_r.push_back(model.mu_r[k]);
    return out;
}

nlohmann::json to_json(const LayeredEarth& model)
{
    return {{"sigma_S_per_m", model.sigma}, {"mu_r", model.mu_r}, {"thickness_m", model.thickness}};
}

namespace {

std::vector<double> number_array(const nlohmann::json& doc, const char* key)
{
    if (!doc.contains(key)) throw SchemaError(std::string("missing field \"") + key + "\"");
    const auto& arr = doc.at(key);
    if (!arr.is_array()) throw SchemaError(std::string("field \"") + key + "\" must be an array");
    std::vector<double> out;
    out.reserve(arr.size());
    for (const auto& v : arr) {
        if (!v.is_number()) throw SchemaError(std::string("field \"") + key + "\" must hold numbers");
        out.push_back(v.get<double>());
    }
    return out;
}

}  // namespace

LayeredEarth model_from_json(const nlohmann::json& doc)
{
    if (!doc.is_object()) throw SchemaError("model document must be a JSON object");
    LayeredEarth m;
    m.sigma = number_array(doc, "sigma_S_per_m");
    m.mu_r = number_array(doc, "mu_r");
    m.thickness = number_array(doc, "thickness_m");
    require_valid(m);
    return m;
}

LayeredEarth load_model(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw Error("cannot open model file " + path.string());
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::parse_error& e) {
        throw SchemaError("malformed model file " + path.string() + ": " + e.what());
    }
    return model_from_json(doc);
}

void save_model(const LayeredEarth& model, const std::filesystem::path& path)
{
    require_valid(model);
    std::ofstream out(path);
    if (!out) throw Error("cannot write model file " + path.string());
    out << to_json(model).dump(2) << '\n';
}

}  // namespace fdem
