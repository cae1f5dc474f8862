#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "fdem/forward.hpp"
#include "fdem/geometry.hpp"

namespace fdem {

struct DeviceConfiguration {
    Orientation orientation = Orientation::HCP;
    std::vector<double> spacings_m;
    bool operator==(const DeviceConfiguration&) const = default;
};

struct DeviceEntry {
    std::string manufacturer;
    std::string name;
    std::vector<DeviceConfiguration> configurations;
    std::optional<double> frequency_hz;                          // single-frequency devices
    std::optional<std::pair<double, double>> frequency_range_hz; // multi-frequency devices
    std::vector<double> default_frequencies_hz;                  // selection used within the range
    DeviceScale units;
    bool seed = false;

    // Frequencies used when the device is simulated without an override.
    [[nodiscard]] std::vector<double> frequencies() const;
    [[nodiscard]] MeasurementGeometry geometry(std::vector<double> heights_m,
                                               std::optional<std::vector<double>> frequencies_hz = {}) const;

    bool operator==(const DeviceEntry&) const = default;
};

[[nodiscard]] std::vector<std::string> validate(const DeviceEntry& entry);
void require_valid(const DeviceEntry& entry);

[[nodiscard]] nlohmann::json to_json(const DeviceEntry& entry);
[[nodiscard]] DeviceEntry device_from_json(const nlohmann::json& doc);

// Not synchronized; callers that share a catalog across threads serialize
// mutations themselves.
class DeviceCatalog {
public:
    DeviceCatalog() = default;

    [[nodiscard]] static DeviceCatalog seed_defaults();
    [[nodiscard]] static std::vector<DeviceEntry> seed_entries();
    // Opens the JSON store at path, creating it from the seed catalog when it
    // does not exist. Mutations are written back immediately.
    [[nodiscard]] static DeviceCatalog open(const std::filesystem::path& path);
    // $FDEM_DATA_DIR/devices.json, or ./fdem-data/devices.json.
    [[nodiscard]] static std::filesystem::path default_store();

    // Sorted by manufacturer, then name.
    [[nodiscard]] const std::vector<DeviceEntry>& list() const noexcept { return entries_; }
    [[nodiscard]] const DeviceEntry& lookup(std::string_view name) const;
    [[nodiscard]] bool contains(std::string_view name) const;

    void upsert(DeviceEntry entry);
    // Seed entries can only be removed with force.
    void remove(std::string_view name, bool force = false);
    // Adds missing seed entries. With force, seed entries are also restored
    // to their defaults.
    void reseed(bool force = false);

    [[nodiscard]] nlohmann::json to_json() const;
    [[nodiscard]] static DeviceCatalog from_json(const nlohmann::json& doc);
    void save(const std::filesystem::path& path) const;

    bool operator==(const DeviceCatalog& other) const { return entries_ == other.entries_; }

private:
    void sort();
    void persist() const;

    std::vector<DeviceEntry> entries_;
    std::optional<std::filesystem::path> store_;
};

}  // namespace fdem
