#include "fdem/csv.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <optional>

#include "fdem/circuit.hpp"
#include "fdem/error.hpp"

namespace fdem {

std::string format_number(double value)
{
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    if (value == 0.0) return "0";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, res.ptr);
}

double parse_number(std::string_view text)
{
    while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
    while (!text.empty() && (text.back() == ' ' || text.back() == '\r')) text.remove_suffix(1);
    if (!text.empty() && text.front() == '+') text.remove_prefix(1);
    double value = 0.0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
    if (res.ec != std::errc() || res.ptr != text.data() + text.size())
        throw SchemaError("not a number: \"" + std::string(text) + "\"");
    return value;
}

namespace {

std::string quote(const std::string& field)
{
    if (field.find_first_of(",\"\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

}  // namespace

void CsvTable::add_row(std::vector<std::string> row)
{
    if (row.size() != header.size()) throw Error("CSV row width does not match the header");
    rows.push_back(std::move(row));
}

std::size_t CsvTable::column(std::string_view name) const
{
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw SchemaError("missing CSV column \"" + std::string(name) + "\"");
    return static_cast<std::size_t>(it - header.begin());
}

std::string CsvTable::str() const
{
    std::string out;
    auto line = [&out](const std::vector<std::string>& fields) {
        for (std::size_t i = 0; i < fields.size(); ++i) {
            if (i) out += ',';
            out += quote(fields[i]);
        }
        out += '\n';
    };
    line(header);
    for (const auto& r : rows) line(r);
    return out;
}

CsvTable parse_csv(std::string_view text)
{
    std::vector<std::vector<std::string>> lines;
    std::vector<std::string> fields;
    std::string field;
    bool quoted = false;
    bool any = false;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field += c;
            }
            continue;
        }
        if (c == '"') {
            quoted = true;
            any = true;
        } else if (c == ',') {
            fields.push_back(std::move(field));
            field.clear();
            any = true;
        } else if (c == '\n') {
            if (any || !field.empty()) {
                fields.push_back(std::move(field));
                lines.push_back(std::move(fields));
            }
            fields.clear();
            field.clear();
            any = false;
        } else if (c != '\r') {
            field += c;
        }
    }
    if (quoted) throw SchemaError("unterminated quoted CSV field");
    if (any || !field.empty()) {
        fields.push_back(std::move(field));
        lines.push_back(std::move(fields));
    }
    if (lines.empty()) throw SchemaError("CSV input is empty");

    CsvTable t;
    t.header = std::move(lines.front());
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].size() != t.header.size())
            throw SchemaError("CSV line " + std::to_string(i + 1) + " has " + std::to_string(lines[i].size()) +
                              " fields, expected " + std::to_string(t.header.size()));
        t.rows.push_back(std::move(lines[i]));
    }
    return t;
}

CsvTable response_table(const ResponseSet& set, DeviceScale scale)
{
    if (set.values.size() != set.geometry.size()) throw Error("response set does not match its geometry");
    CsvTable t;
    t.header = kResponseColumns;
    for (std::size_t i = 0; i < set.values.size(); ++i) {
        const ForwardResponse r{set.geometry.at(i), set.values[i]};
        const auto d = to_device_units(r, scale);
        t.add_row({std::string(to_string(r.measurement.orientation)), format_number(r.measurement.spacing_m),
                   format_number(r.measurement.frequency_hz), format_number(r.measurement.height_m),
                   format_number(r.quadrature()), format_number(r.in_phase()), format_number(d.q_mS_per_m),
                   format_number(d.p)});
    }
    return t;
}

std::string response_csv(const ResponseSet& set, DeviceScale scale) { return response_table(set, scale).str(); }

namespace {

template <class T>
std::size_t index_of(std::vector<T>& axis, const T& v)
{
    const auto it = std::find(axis.begin(), axis.end(), v);
    if (it != axis.end()) return static_cast<std::size_t>(it - axis.begin());
    axis.push_back(v);
    return axis.size() - 1;
}

}  // namespace

ResponseSet read_response_csv(std::string_view text)
{
    const auto t = parse_csv(text);
    const auto co = t.column("orientation");
    const auto cs = t.column("spacing_m");
    const auto cf = t.column("frequency_Hz");
    const auto ch = t.column("height_m");
    const auto cq = t.column("Q_raw");
    const auto cp = t.column("P_raw");
    if (t.rows.empty()) throw SchemaError("response CSV has no data rows");

    MeasurementGeometry g;
    struct Row {
        std::size_t o, s, f, h;
        cplx v;
    };
    std::vector<Row> rows;
    for (const auto& r : t.rows) {
        const auto o = index_of(g.orientations, parse_orientation(r[co]));
        if (g.spacings_m.size() < g.orientations.size()) g.spacings_m.emplace_back();
        const auto s = index_of(g.spacings_m[o], parse_number(r[cs]));
        const auto f = index_of(g.frequencies_hz, parse_number(r[cf]));
        const auto h = index_of(g.heights_m, parse_number(r[ch]));
        rows.push_back({o, s, f, h, cplx(parse_number(r[cp]), parse_number(r[cq]))});
    }
    require_valid(g);
    if (rows.size() != g.size())
        throw ValidationError({"response CSV has " + std::to_string(rows.size()) + " rows but its axes span " +
                               std::to_string(g.size()) + " measurements"});
    ResponseSet set{g, std::vector<cplx>(g.size())};
    std::vector<bool> seen(g.size(), false);
    for (const auto& r : rows) {
        const auto k = g.flat_index({r.o, r.s, r.f, r.h});
        if (seen[k]) throw ValidationError({"response CSV lists a measurement twice"});
        seen[k] = true;
        set.values[k] = r.v;
    }
    return set;
}

CsvTable sensitivity_table(const SensitivityProfile& p, const CumulativeCurve& curve)
{
    if (curve.values.size() != p.depths_m.size()) throw Error("cumulative curve does not match the profile grid");
    CsvTable t;
    t.header = kSensitivityColumns;
    for (std::size_t i = 0; i < p.depths_m.size(); ++i) {
        t.add_row({format_number(p.depths_m[i]), format_number(p.s_sigma[i].real()),
                   format_number(p.s_sigma[i].imag()), format_number(p.s_mu[i].real()),
                   format_number(p.s_mu[i].imag()), format_number(curve.values[i])});
    }
    return t;
}

std::string sensitivity_csv(const SensitivityProfile& p, const CumulativeCurve& curve)
{
    return sensitivity_table(p, curve).str();
}

std::vector<double> log_space(double lo, double hi, std::size_t count)
{
    if (!(lo > 0.0) || !(lo < hi) || count < 2) throw ValidationError({"log range needs 0 < min < max and 2+ points"});
    std::vector<double> out(count);
    const double a = std::log10(lo);
    const double b = std::log10(hi);
    for (std::size_t i = 0; i < count; ++i)
        out[i] = std::pow(10.0, a + (b - a) * static_cast<double>(i) / static_cast<double>(count - 1));
    out.front() = lo;
    out.back() = hi;
    return out;
}

CsvTable g_beta_table(const std::vector<double>& betas)
{
    CsvTable t;
    t.header = {"beta", "Re_G", "Im_G", "abs_G"};
    for (double b : betas) {
        const auto g = response_function(b);
        t.add_row({format_number(b), format_number(g.real()), format_number(g.imag()), format_number(std::abs(g))});
    }
    return t;
}

}  // namespace fdem
