#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "fdem/devices.hpp"
#include "fdem/diagnostics.hpp"
#include "fdem/earth_model.hpp"
#include "fdem/forward.hpp"
#include "fdem/geometry.hpp"
#include "fdem/inversion.hpp"

namespace fdem::api {

using nlohmann::json;

// The two three-layer reference models: M2 differs from M1 only in the
// conductivity of the middle layer.
[[nodiscard]] LayeredEarth builtin_model(std::string_view name);
[[nodiscard]] bool is_builtin_model(std::string_view name);

// A model reference is either an inline model object or a built-in name.
[[nodiscard]] LayeredEarth resolve_model(const json& ref);

struct ResolvedGeometry {
    MeasurementGeometry geometry;
    DeviceScale scale;
    std::optional<std::string> device;
};

// Reads "geometry" (explicit) or "device" plus "heights_m"/"height_m" and an
// optional "frequencies_Hz" override. default_heights is used when the
// request names no height.
[[nodiscard]] ResolvedGeometry resolve_geometry(const json& request, const DeviceCatalog& catalog,
                                                std::optional<std::vector<double>> default_heights = {});

// "min:step:max" (inclusive, linear) or "min:log:max" (log spaced, count
// points). Ranges need min < max and a positive step.
struct SweepRange {
    double min = 0.0;
    double max = 0.0;
    double step = 0.0;
    bool log = false;
    std::size_t points = 61;
    int decimals = 15;  // linear grids are rounded to this many decimals

    [[nodiscard]] std::vector<double> values() const;
};

[[nodiscard]] SweepRange parse_range(std::string_view text, std::size_t log_points = 61);

struct ForwardPlan {
    LayeredEarth model;
    ResolvedGeometry geometry;
};

[[nodiscard]] ForwardPlan plan_forward(const json& request, const DeviceCatalog& catalog);
[[nodiscard]] ForwardPlan plan_sweep(const json& request, const DeviceCatalog& catalog);

[[nodiscard]] json forward(const json& request, const DeviceCatalog& catalog);
[[nodiscard]] json sweep(const json& request, const DeviceCatalog& catalog);
[[nodiscard]] std::string forward_csv(const json& request, const DeviceCatalog& catalog);
[[nodiscard]] std::string sweep_csv(const json& request, const DeviceCatalog& catalog);

// kind: skin | beta | sensitivity | cumulative
[[nodiscard]] json diagnostics(const json& request, const DeviceCatalog& catalog);
[[nodiscard]] std::string diagnostics_csv(const json& request, const DeviceCatalog& catalog);
[[nodiscard]] json doi(const json& request, const DeviceCatalog& catalog);

[[nodiscard]] InversionOptions options_from_json(const json& doc);
[[nodiscard]] json to_json(const InversionOptions& opts);
[[nodiscard]] ResponseSet data_from_json(const json& doc);
[[nodiscard]] json to_json(const ResponseSet& data);
[[nodiscard]] json invert(const json& request);

// Synthetic data set: forward response plus seeded relative Gaussian noise.
[[nodiscard]] ResponseSet synthesize(const json& request, const DeviceCatalog& catalog);
[[nodiscard]] std::string synthesize_csv(const json& request, const DeviceCatalog& catalog);

[[nodiscard]] json devices(const DeviceCatalog& catalog);

// Machine-readable error document shared by the CLI and the service.
[[nodiscard]] json error_json(const std::exception& e);
// Canonical text form: two-space indentation and a trailing newline.
[[nodiscard]] std::string render(const json& doc);

}  // namespace fdem::api
