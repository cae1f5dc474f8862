#include "fdem/figures.hpp"

#include <fstream>

#include "fdem/api.hpp"
#include "fdem/circuit.hpp"
#include "fdem/csv.hpp"
#include "fdem/diagnostics.hpp"
#include "fdem/error.hpp"

namespace fdem {

namespace {

using nlohmann::json;

constexpr double kOperatingHeight = 0.9;
const char* const kHeightRange = "0:0.05:3";
const char* const kGemRange = "30:log:93000";

void write(const std::filesystem::path& dir, const std::string& name, const std::string& text,
           std::vector<std::string>& written)
{
    std::ofstream out(dir / name, std::ios::binary);
    if (!out) throw Error("cannot write " + (dir / name).string());
    out << text;
    written.push_back(name);
}

CsvTable prefixed(std::vector<std::string> prefix_header, const std::vector<std::string>& header)
{
    CsvTable t;
    t.header = std::move(prefix_header);
    t.header.insert(t.header.end(), header.begin(), header.end());
    return t;
}

void append(CsvTable& t, const std::vector<std::string>& prefix, const CsvTable& inner)
{
    for (const auto& r : inner.rows) {
        auto row = prefix;
        row.insert(row.end(), r.begin(), r.end());
        t.add_row(std::move(row));
    }
}

std::string sensitivity_figure(const DeviceCatalog& catalog, const std::string& device,
                               SensitivityComponent component)
{
    auto t = prefixed({"model", "orientation", "spacing_m", "frequency_Hz", "height_m"}, kSensitivityColumns);
    const auto g = catalog.lookup(device).geometry({kOperatingHeight});
    for (const char* name : {"M1", "M2"}) {
        const auto model = api::builtin_model(name);
        for (std::size_t i = 0; i < g.size(); ++i) {
            const auto m = g.at(i);
            const auto p = sensitivity_analytic(model, m);
            append(t,
                   {name, std::string(to_string(m.orientation)), format_number(m.spacing_m),
                    format_number(m.frequency_hz), format_number(m.height_m)},
                   sensitivity_table(p, cumulative_response(p, component)));
        }
    }
    return t.str();
}

std::string table3(const DeviceCatalog& catalog)
{
    CsvTable t;
    t.header = {"device", "orientation", "spacing_m", "frequency_Hz", "skin_depth_M1_m", "beta_M1",
                "skin_depth_M2_m", "beta_M2"};
    const auto m1 = api::builtin_model("M1");
    const auto m2 = api::builtin_model("M2");
    for (const char* device : {"Dualem-21H", "CMD Explorer", "GEM-2"}) {
        const auto& e = catalog.lookup(device);
        std::vector<DeviceConfiguration> rows;
        for (const auto& c : e.configurations) {
            // Coil pairs sharing one set of offsets give identical rows.
            bool dup = false;
            for (auto& r : rows) dup = dup || r.spacings_m == c.spacings_m;
            if (!dup) rows.push_back(c);
        }
        for (const auto& c : rows) {
            for (double s : c.spacings_m) {
                for (double f : e.frequencies()) {
                    const double d1 = survey_skin_depth(m1, f);
                    const double d2 = survey_skin_depth(m2, f);
                    t.add_row({e.name, std::string(to_string(c.orientation)), format_number(s), format_number(f),
                               format_number(d1), format_number(induction_number(s, d1)), format_number(d2),
                               format_number(induction_number(s, d2))});
                }
            }
        }
    }
    return t.str();
}

std::string table4(const DeviceCatalog& catalog)
{
    CsvTable t;
    t.header = {"model", "device", "orientation", "spacing_m", "frequency_Hz", "height_m", "tau", "doi_m", "reached"};
    for (const char* name : {"M1", "M2"}) {
        const auto model = api::builtin_model(name);
        for (const char* device : {"Dualem-21H", "CMD Explorer", "GEM-2"}) {
            auto g = catalog.lookup(device).geometry({kOperatingHeight});
            if (std::string(device) == "GEM-2") {
                // The study tabulates the GEM-2 HCP pair only.
                g.orientations.resize(1);
                g.spacings_m.resize(1);
            }
            for (std::size_t i = 0; i < g.size(); ++i) {
                const auto m = g.at(i);
                const auto est = depth_of_investigation(model, m, kDefaultDoiThreshold);
                t.add_row({name, device, std::string(to_string(m.orientation)), format_number(m.spacing_m),
                           format_number(m.frequency_hz), format_number(m.height_m), format_number(est.tau),
                           format_number(est.doi_m), est.reached ? "true" : "false"});
            }
        }
    }
    return t.str();
}

}  // namespace

std::vector<std::string> write_figures(const std::filesystem::path& dir)
{
    std::filesystem::create_directories(dir);
    const auto catalog = DeviceCatalog::seed_defaults();
    std::vector<std::string> written;

    const struct {
        const char* file;
        const char* model;
        const char* device;
    } heights[] = {{"fig07_dualem21h_M1_height.csv", "M1", "Dualem-21H"},
                   {"fig08_cmd_explorer_M1_height.csv", "M1", "CMD Explorer"},
                   {"fig09_dualem21h_M2_height.csv", "M2", "Dualem-21H"},
                   {"fig10_cmd_explorer_M2_height.csv", "M2", "CMD Explorer"}};
    for (const auto& h : heights) {
        const json req = {{"model", h.model}, {"device", h.device}, {"axis", "height"}, {"range", kHeightRange}};
        write(dir, h.file, api::sweep_csv(req, catalog), written);
    }

    {
        auto t = prefixed({"model"}, kResponseColumns);
        for (const char* name : {"M1", "M2"}) {
            const json req = {{"model", name}, {"device", "GEM-2"}, {"heights_m", {0.2, kOperatingHeight}},
                              {"axis", "frequency"}, {"range", kGemRange}};
            const auto plan = api::plan_sweep(req, catalog);
            append(t, {name}, response_table(response_batch(plan.model, plan.geometry.geometry), plan.geometry.scale));
        }
        write(dir, "fig11_gem2_frequency.csv", t.str(), written);
    }

    {
        CsvTable t;
        t.header = {"model", "frequency_Hz", "skin_depth_m", "beta"};
        const double spacing = catalog.lookup("GEM-2").configurations.front().spacings_m.front();
        for (const char* name : {"M1", "M2"}) {
            const auto model = api::builtin_model(name);
            for (double f : api::parse_range(kGemRange).values()) {
                const double d = survey_skin_depth(model, f);
                t.add_row({name, format_number(f), format_number(d), format_number(induction_number(spacing, d))});
            }
        }
        write(dir, "fig12_gem2_induction_number.csv", t.str(), written);
    }

    write(dir, "fig13_dualem21h_sigma_sensitivity.csv",
          sensitivity_figure(catalog, "Dualem-21H", SensitivityComponent::SigmaQuadrature), written);
    write(dir, "fig14_dualem21h_mu_sensitivity.csv",
          sensitivity_figure(catalog, "Dualem-21H", SensitivityComponent::MuQuadrature), written);
    write(dir, "fig15_cmd_explorer_sigma_sensitivity.csv",
          sensitivity_figure(catalog, "CMD Explorer", SensitivityComponent::SigmaQuadrature), written);
    write(dir, "fig16_cmd_explorer_mu_sensitivity.csv",
          sensitivity_figure(catalog, "CMD Explorer", SensitivityComponent::MuQuadrature), written);
    write(dir, "fig17_gem2_sensitivity.csv",
          sensitivity_figure(catalog, "GEM-2", SensitivityComponent::SigmaQuadrature), written);

    write(dir, "figA5_response_function.csv", g_beta_table(log_space(1e-2, 1e2, 81)).str(), written);
    write(dir, "table3_skin_depth_induction_number.csv", table3(catalog), written);
    write(dir, "table4_depth_of_investigation.csv", table4(catalog), written);
    return written;
}

}  // namespace fdem
