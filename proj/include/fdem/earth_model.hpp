#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "fdem/types.hpp"

namespace fdem {

struct LayeredEarth {
    std::vector<double> sigma;      // S/m
    std::vector<double> mu_r;       // relative permeability
    std::vector<double> thickness;  // m, one fewer than layers

    [[nodiscard]] std::size_t layers() const noexcept { return sigma.size(); }
    [[nodiscard]] double mu(std::size_t k) const { return mu_r.at(k) * kMu0; }
    // Top depth of every layer, starting at 0.
    [[nodiscard]] std::vector<double> depths() const;

    [[nodiscard]] static LayeredEarth homogeneous(double sigma, double mu_r = 1.0);

    bool operator==(const LayeredEarth&) const = default;
};

[[nodiscard]] std::vector<std::string> validate(const LayeredEarth& model);
void require_valid(const LayeredEarth& model);

// Resample onto uniform cells of the given size down to max_depth. Each cell
// takes the properties found at its midpoint; ties on a layer boundary go to
// the upper layer. The half-space below max_depth keeps the deepest properties.
[[nodiscard]] LayeredEarth discretize(const LayeredEarth& model, double cell, double max_depth);

[[nodiscard]] nlohmann::json to_json(const LayeredEarth& model);
[[nodiscard]] LayeredEarth model_from_json(const nlohmann::json& doc);
[[nodiscard]] LayeredEarth load_model(const std::filesystem::path& path);
void save_model(const LayeredEarth& model, const std::filesystem::path& path);

}  // namespace fdem
