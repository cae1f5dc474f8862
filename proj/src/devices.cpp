#include "fdem/devices.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>

#include "fdem/error.hpp"

namespace fdem {

std::vector<double> DeviceEntry::frequencies() const
{
    if (frequency_hz) return {*frequency_hz};
    return default_frequencies_hz;
}

MeasurementGeometry DeviceEntry::geometry(std::vector<double> heights_m,
                                          std::optional<std::vector<double>> frequencies_hz) const
{
    MeasurementGeometry g;
    for (const auto& c : configurations) {
        g.orientations.push_back(c.orientation);
        g.spacings_m.push_back(c.spacings_m);
    }
    g.frequencies_hz = frequencies_hz ? std::move(*frequencies_hz) : frequencies();
    g.heights_m = std::move(heights_m);
    require_valid(g);
    return g;
}

std::vector<std::string> validate(const DeviceEntry& e)
{
    std::vector<std::string> issues;
    if (e.name.empty()) issues.emplace_back("device name must not be empty");
    if (e.manufacturer.empty()) issues.emplace_back("manufacturer must not be empty");
    if (e.configurations.empty()) issues.emplace_back("at least one configuration is required");
    for (std::size_t i = 0; i < e.configurations.size(); ++i) {
        const auto& c = e.configurations[i];
        if (c.spacings_m.empty()) issues.emplace_back("every configuration needs at least one spacing");
        if (std::any_of(c.spacings_m.begin(), c.spacings_m.end(), [](double s) { return !(s > 0.0); }))
            issues.emplace_back("spacings must be positive");
        if (!std::is_sorted(c.spacings_m.begin(), c.spacings_m.end()) ||
            std::adjacent_find(c.spacings_m.begin(), c.spacings_m.end()) != c.spacings_m.end())
            issues.emplace_back("spacings must be strictly increasing");
        if (c.spacings_m.size() != e.configurations.front().spacings_m.size())
            issues.emplace_back("every configuration must list the same number of spacings");
        for (std::size_t j = 0; j < i; ++j) {
            if (e.configurations[j].orientation == c.orientation)
                issues.emplace_back("orientations must not repeat");
        }
    }
    if (e.frequency_hz.has_value() == e.frequency_range_hz.has_value())
        issues.emplace_back("give either a single frequency or a frequency range");
    if (e.frequency_hz && !(*e.frequency_hz > 0.0)) issues.emplace_back("frequency must be positive");
    if (e.frequency_range_hz) {
        const auto [lo, hi] = *e.frequency_range_hz;
        if (!(lo > 0.0) || !(lo < hi)) issues.emplace_back("frequency range needs 0 < min < max");
        if (e.default_frequencies_hz.empty())
            issues.emplace_back("multi-frequency devices need a default frequency selection");
        for (double f : e.default_frequencies_hz) {
            if (!(f >= lo && f <= hi)) {
                issues.emplace_back("default frequencies must lie inside the frequency range");
                break;
            }
        }
    }
    return issues;
}

void require_valid(const DeviceEntry& entry)
{
    auto issues = validate(entry);
    if (!issues.empty()) throw ValidationError(std::move(issues));
}

nlohmann::json to_json(const DeviceEntry& e)
{
    nlohmann::json configs = nlohmann::json::array();
    for (const auto& c : e.configurations)
        configs.push_back({{"orientation", std::string(to_string(c.orientation))}, {"spacings_m", c.spacings_m}});
    nlohmann::json doc = {{"manufacturer", e.manufacturer},
                          {"name", e.name},
                          {"configurations", configs},
                          {"units", {{"Q", std::string(to_string(e.units.q))}, {"P", std::string(to_string(e.units.p))}}},
                          {"seed", e.seed}};
    if (e.frequency_hz) doc["frequency_Hz"] = *e.frequency_hz;
    if (e.frequency_range_hz)
        doc["frequency_range_Hz"] = {e.frequency_range_hz->first, e.frequency_range_hz->second};
    if (!e.default_frequencies_hz.empty()) doc["default_frequencies_Hz"] = e.default_frequencies_hz;
    return doc;
}

namespace {

template <class T>
T get_field(const nlohmann::json& doc, const char* key)
{
    if (!doc.contains(key)) throw SchemaError(std::string("missing field \"") + key + "\"");
    try {
        return doc.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw SchemaError(std::string("field \"") + key + "\" has the wrong type");
    }
}

}  // namespace

DeviceEntry device_from_json(const nlohmann::json& doc)
{
    if (!doc.is_object()) throw SchemaError("device entry must be a JSON object");
    DeviceEntry e;
    e.manufacturer = get_field<std::string>(doc, "manufacturer");
    e.name = get_field<std::string>(doc, "name");
    const auto configs = get_field<nlohmann::json>(doc, "configurations");
    if (!configs.is_array()) throw SchemaError("field \"configurations\" must be an array");
    for (const auto& c : configs) {
        DeviceConfiguration dc;
        dc.orientation = parse_orientation(get_field<std::string>(c, "orientation"));
        dc.spacings_m = get_field<std::vector<double>>(c, "spacings_m");
        e.configurations.push_back(std::move(dc));
    }
    if (doc.contains("frequency_Hz") && !doc.at("frequency_Hz").is_null())
        e.frequency_hz = get_field<double>(doc, "frequency_Hz");
    if (doc.contains("frequency_range_Hz") && !doc.at("frequency_range_Hz").is_null()) {
        const auto r = get_field<std::vector<double>>(doc, "frequency_range_Hz");
        if (r.size() != 2) throw SchemaError("field \"frequency_range_Hz\" must hold [min, max]");
        e.frequency_range_hz = std::make_pair(r[0], r[1]);
    }
    if (doc.contains("default_frequencies_Hz"))
        e.default_frequencies_hz = get_field<std::vector<double>>(doc, "default_frequencies_Hz");
    const auto units = get_field<nlohmann::json>(doc, "units");
    e.units.q = parse_quadrature_unit(get_field<std::string>(units, "Q"));
    e.units.p = parse_in_phase_unit(get_field<std::string>(units, "P"));
    if (doc.contains("seed")) e.seed = get_field<bool>(doc, "seed");
    require_valid(e);
    return e;
}

std::vector<DeviceEntry> DeviceCatalog::seed_entries()
{
    using O = Orientation;
    const DeviceScale standard{QuadratureUnit::MilliSiemensPerMetre, InPhaseUnit::PartsPerThousand};
    auto single = [&](std::string maker, std::string name, std::vector<DeviceConfiguration> configs, double f) {
        DeviceEntry e;
        e.manufacturer = std::move(maker);
        e.name = std::move(name);
        e.configurations = std::move(configs);
        e.frequency_hz = f;
        e.units = standard;
        e.seed = true;
        return e;
    };
    auto both = [](std::vector<double> s) {
        return std::vector<DeviceConfiguration>{{O::HCP, s}, {O::VCP, s}};
    };

    std::vector<DeviceEntry> out;
    out.push_back(single("Gf Instruments", "CMD Mini-Explorer", both({0.32, 0.71, 1.18}), 30000.0));
    out.push_back(single("Gf Instruments", "CMD Explorer", both({1.48, 2.82, 4.49}), 10000.0));
    out.push_back(single("Gf Instruments", "CMD DUO", both({10.0, 20.0, 40.0}), 925.0));
    out.push_back(single("Dualem Inc.", "Dualem-21", {{O::HCP, {1.0, 2.0}}, {O::PERP, {1.1, 2.1}}}, 9000.0));
    out.push_back(single("Dualem Inc.", "Dualem-21H", {{O::HCP, {0.5, 1.0, 2.0}}, {O::PERP, {0.6, 1.1, 2.1}}}, 9000.0));
    out.push_back(single("Dualem Inc.", "Dualem-421", {{O::HCP, {1.0, 2.0, 4.0}}, {O::PERP, {1.1, 2.1, 4.1}}}, 9000.0));
    out.push_back(single("Geonics Limited", "EM38-MK2", both({0.5, 1.0}), 14500.0));
    out.push_back(single("Geonics Limited", "EM31-MK2", {{O::HCP, {3.66}}}, 9800.0));

    DeviceEntry gem;
    gem.manufacturer = "Geophex Ltd.";
    gem.name = "GEM-2";
    gem.configurations = both({1.66});
    gem.frequency_range_hz = std::make_pair(30.0, 93000.0);
    // Example selection from the survey-design study, not a manufacturer preset.
    gem.default_frequencies_hz = {1275.0, 4250.0, 12525.0, 28725.0, 54150.0, 82150.0};
    gem.units = {QuadratureUnit::PartsPerMillion, InPhaseUnit::PartsPerMillion};
    gem.seed = true;
    out.push_back(std::move(gem));
    return out;
}

DeviceCatalog DeviceCatalog::seed_defaults()
{
    DeviceCatalog c;
    c.entries_ = seed_entries();
    c.sort();
    return c;
}

std::filesystem::path DeviceCatalog::default_store()
{
    const char* dir = std::getenv("FDEM_DATA_DIR");
    return std::filesystem::path(dir && *dir ? dir : "fdem-data") / "devices.json";
}

DeviceCatalog DeviceCatalog::open(const std::filesystem::path& path)
{
    DeviceCatalog c;
    if (std::filesystem::exists(path)) {
        std::ifstream in(path);
        if (!in) throw Error("cannot open device store " + path.string());
        nlohmann::json doc;
        try {
            in >> doc;
        } catch (const nlohmann::json::parse_error& e) {
            throw SchemaError("malformed device store " + path.string() + ": " + e.what());
        }
        c = from_json(doc);
        c.store_ = path;
    } else {
        c = seed_defaults();
        c.store_ = path;
        c.persist();
    }
    return c;
}

const DeviceEntry& DeviceCatalog::lookup(std::string_view name) const
{
    for (const auto& e : entries_) {
        if (e.name == name) return e;
    }
    throw NotFoundError("unknown device \"" + std::string(name) + "\"");
}

bool DeviceCatalog::contains(std::string_view name) const
{
    return std::any_of(entries_.begin(), entries_.end(), [&](const DeviceEntry& e) { return e.name == name; });
}

void DeviceCatalog::upsert(DeviceEntry entry)
{
    require_valid(entry);
    auto it = std::find_if(entries_.begin(), entries_.end(), [&](const DeviceEntry& e) { return e.name == entry.name; });
    if (it != entries_.end()) {
        // An edited seed entry keeps its seed flag so it stays protected.
        entry.seed = entry.seed || it->seed;
        *it = std::move(entry);
    } else {
        entries_.push_back(std::move(entry));
    }
    sort();
    persist();
}

void DeviceCatalog::remove(std::string_view name, bool force)
{
    auto it = std::find_if(entries_.begin(), entries_.end(), [&](const DeviceEntry& e) { return e.name == name; });
    if (it == entries_.end()) throw NotFoundError("unknown device \"" + std::string(name) + "\"");
    if (it->seed && !force)
        throw ValidationError({"\"" + std::string(name) + "\" is a built-in device; removing it needs force"});
    entries_.erase(it);
    persist();
}

void DeviceCatalog::reseed(bool force)
{
    for (auto& s : seed_entries()) {
        auto it = std::find_if(entries_.begin(), entries_.end(), [&](const DeviceEntry& e) { return e.name == s.name; });
        if (it == entries_.end())
            entries_.push_back(std::move(s));
        else if (force)
            *it = std::move(s);
    }
    sort();
    persist();
}

nlohmann::json DeviceCatalog::to_json() const
{
    nlohmann::json devices = nlohmann::json::array();
    for (const auto& e : entries_) devices.push_back(fdem::to_json(e));
    return {{"version", 1}, {"devices", devices}};
}

DeviceCatalog DeviceCatalog::from_json(const nlohmann::json& doc)
{
    if (!doc.is_object() || !doc.contains("devices") || !doc.at("devices").is_array())
        throw SchemaError("device store must be an object with a \"devices\" array");
    DeviceCatalog c;
    for (const auto& d : doc.at("devices")) {
        auto e = device_from_json(d);
        if (c.contains(e.name)) throw ValidationError({"duplicate device \"" + e.name + "\""});
        c.entries_.push_back(std::move(e));
    }
    c.sort();
    return c;
}

void DeviceCatalog::save(const std::filesystem::path& path) const
{
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp);
        if (!out) throw Error("cannot write device store " + tmp.string());
        out << to_json().dump(2) << '\n';
    }
    std::filesystem::rename(tmp, path);
}

void DeviceCatalog::sort()
{
    std::sort(entries_.begin(), entries_.end(), [](const DeviceEntry& a, const DeviceEntry& b) {
        return std::tie(a.manufacturer, a.name) < std::tie(b.manufacturer, b.name);
    });
}

void DeviceCatalog::persist() const
{
    if (store_) save(*store_);
}

}  // namespace fdem
