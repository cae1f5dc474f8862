#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "fdem/types.hpp"

namespace fdem {

struct Measurement {
    Orientation orientation = Orientation::HCP;
    double spacing_m = 1.0;
    double frequency_hz = 1.0;
    double height_m = 0.0;
};

// Spacings are stored per orientation because some instruments use different
// offsets for different coil pairs (Dualem PERP receivers sit 0.1 m further).
// Every orientation must list the same number of spacings.
struct MeasurementGeometry {
    std::vector<Orientation> orientations;
    std::vector<std::vector<double>> spacings_m;
    std::vector<double> frequencies_hz;
    std::vector<double> heights_m;

    struct Index {
        std::size_t orientation = 0;
        std::size_t spacing = 0;
        std::size_t frequency = 0;
        std::size_t height = 0;
        bool operator==(const Index&) const = default;
    };

    [[nodiscard]] static MeasurementGeometry uniform(std::vector<Orientation> orientations,
                                                     const std::vector<double>& spacings,
                                                     std::vector<double> frequencies,
                                                     std::vector<double> heights);

    [[nodiscard]] std::size_t spacing_count() const noexcept;
    [[nodiscard]] std::size_t size() const noexcept;
    [[nodiscard]] std::size_t flat_index(const Index& idx) const;
    [[nodiscard]] Index unflatten(std::size_t flat) const;
    [[nodiscard]] Measurement at(std::size_t flat) const;

    bool operator==(const MeasurementGeometry&) const = default;
};

[[nodiscard]] std::vector<std::string> validate(const MeasurementGeometry& geometry);
void require_valid(const MeasurementGeometry& geometry);

[[nodiscard]] nlohmann::json to_json(const MeasurementGeometry& geometry);
[[nodiscard]] MeasurementGeometry geometry_from_json(const nlohmann::json& doc);

struct ResponseSet {
    MeasurementGeometry geometry;
    std::vector<cplx> values;

    [[nodiscard]] std::size_t size() const noexcept { return values.size(); }
};

}  // namespace fdem
