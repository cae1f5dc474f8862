#include "fdem/geometry.hpp"

#include <cmath>

#include "fdem/error.hpp"

namespace fdem {

std::string_view to_string(Orientation o) noexcept
{
    switch (o) {
    case Orientation::HCP: return "HCP";
    case Orientation::VCP: return "VCP";
    case Orientation::PERP: return "PERP";
    }
    return "?";
}

Orientation parse_orientation(std::string_view text)
{
    if (text == "HCP") return Orientation::HCP;
    if (text == "VCP") return Orientation::VCP;
    if (text == "PERP") return Orientation::PERP;
    throw SchemaError("unknown orientation \"" + std::string(text) + "\"");
}

MeasurementGeometry MeasurementGeometry::uniform(std::vector<Orientation> orientations,
                                                 const std::vector<double>& spacings,
                                                 std::vector<double> frequencies,
                                                 std::vector<double> heights)
{
    MeasurementGeometry g;
    g.spacings_m.assign(orientations.size(), spacings);
    g.orientations = std::move(orientations);
    g.frequencies_hz = std::move(frequencies);
    g.heights_m = std::move(heights);
    return g;
}

std::size_t MeasurementGeometry::spacing_count() const noexcept
{
    return spacings_m.empty() ? 0 : spacings_m.front().size();
}

std::size_t MeasurementGeometry::size() const noexcept
{
    return orientations.size() * spacing_count() * frequencies_hz.size() * heights_m.size();
}

std::size_t MeasurementGeometry::flat_index(const Index& idx) const
{
    if (idx.orientation >= orientations.size() || idx.spacing >= spacing_count() ||
        idx.frequency >= frequencies_hz.size() || idx.height >= heights_m.size())
        throw std::out_of_range("measurement index out of range");
    return ((idx.orientation * spacing_count() + idx.spacing) * frequencies_hz.size() + idx.frequency) *
               heights_m.size() +
           idx.height;
}

MeasurementGeometry::Index MeasurementGeometry::unflatten(std::size_t flat) const
{
    if (flat >= size()) throw std::out_of_range("flat index out of range");
    Index idx;
    idx.height = flat % heights_m.size();
    flat /= heights_m.size();
    idx.frequency = flat % frequencies_hz.size();
    flat /= frequencies_hz.size();
    idx.spacing = flat % spacing_count();
    idx.orientation = flat / spacing_count();
    return idx;
}

Measurement MeasurementGeometry::at(std::size_t flat) const
{
    const auto idx = unflatten(flat);
    return {orientations[idx.orientation], spacings_m[idx.orientation][idx.spacing],
            frequencies_hz[idx.frequency], heights_m[idx.height]};
}

std::vector<std::string> validate(const MeasurementGeometry& g)
{
    std::vector<std::string> issues;
    if (g.orientations.empty()) issues.emplace_back("at least one orientation is required");
    if (g.spacings_m.size() != g.orientations.size())
        issues.emplace_back("one spacing list per orientation is required");
    if (g.spacing_count() == 0) issues.emplace_back("at least one spacing is required");
    for (const auto& row : g.spacings_m) {
        if (row.size() != g.spacing_count()) {
            issues.emplace_back("every orientation must list the same number of spacings");
            break;
        }
    }
    for (const auto& row : g.spacings_m) {
        bool bad = false;
        for (double s : row) bad = bad || !std::isfinite(s) || s <= 0.0;
        if (bad) {
            issues.emplace_back("spacings must be positive");
            break;
        }
    }
    if (g.frequencies_hz.empty()) issues.emplace_back("at least one frequency is required");
    for (double f : g.frequencies_hz) {
        if (!std::isfinite(f) || f <= 0.0) {
            issues.emplace_back("frequencies must be positive");
            break;
        }
    }
    if (g.heights_m.empty()) issues.emplace_back("at least one height is required");
    for (double h : g.heights_m) {
        if (!std::isfinite(h) || h < 0.0) {
            issues.emplace_back("heights must be non-negative");
            break;
        }
    }
    return issues;
}

void require_valid(const MeasurementGeometry& g)
{
    auto issues = validate(g);
    if (!issues.empty()) throw ValidationError(std::move(issues));
}

nlohmann::json to_json(const MeasurementGeometry& g)
{
    nlohmann::json orient = nlohmann::json::array();
    for (auto o : g.orientations) orient.push_back(std::string(to_string(o)));
    nlohmann::json spacings;
    bool same = true;
    for (const auto& row : g.spacings_m) same = same && row == g.spacings_m.front();
    if (same && !g.spacings_m.empty())
        spacings = g.spacings_m.front();
    else
        spacings = g.spacings_m;
    return {{"orientations", orient},
            {"spacings_m", spacings},
            {"frequencies_Hz", g.frequencies_hz},
            {"heights_m", g.heights_m}};
}

namespace {

std::vector<double> numbers(const nlohmann::json& arr, const std::string& key)
{
    if (!arr.is_array()) throw SchemaError("field \"" + key + "\" must be an array");
    std::vector<double> out;
    for (const auto& v : arr) {
        if (!v.is_number()) throw SchemaError("field \"" + key + "\" must hold numbers");
        out.push_back(v.get<double>());
    }
    return out;
}

const nlohmann::json& field(const nlohmann::json& doc, const std::string& key)
{
    if (!doc.contains(key)) throw SchemaError("missing field \"" + key + "\"");
    return doc.at(key);
}

}  // namespace

MeasurementGeometry geometry_from_json(const nlohmann::json& doc)
{
    if (!doc.is_object()) throw SchemaError("geometry document must be a JSON object");
    MeasurementGeometry g;
    const auto& orient = field(doc, "orientations");
    if (!orient.is_array()) throw SchemaError("field \"orientations\" must be an array");
    for (const auto& o : orient) {
        if (!o.is_string()) throw SchemaError("orientations must be strings");
        g.orientations.push_back(parse_orientation(o.get<std::string>()));
    }
    const auto& sp = field(doc, "spacings_m");
    if (!sp.is_array()) throw SchemaError("field \"spacings_m\" must be an array");
    if (!sp.empty() && sp.front().is_array()) {
        for (const auto& row : sp) g.spacings_m.push_back(numbers(row, "spacings_m"));
    } else {
        g.spacings_m.assign(g.orientations.size(), numbers(sp, "spacings_m"));
    }
    g.frequencies_hz = numbers(field(doc, "frequencies_Hz"), "frequencies_Hz");
    g.heights_m = numbers(field(doc, "heights_m"), "heights_m");
    require_valid(g);
    return g;
}

}  // namespace fdem
