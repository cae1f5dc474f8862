#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "fdem/api.hpp"
#include "fdem/csv.hpp"
#include "fdem/devices.hpp"
#include "fdem/error.hpp"
#include "fdem/figures.hpp"
#include "fdem/service.hpp"

namespace {

using nlohmann::json;
namespace api = fdem::api;

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw fdem::NotFoundError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json read_json_file(const std::string& path)
{
    try {
        return json::parse(read_file(path));
    } catch (const json::parse_error& e) {
        throw fdem::SchemaError("malformed JSON in " + path + ": " + e.what());
    }
}

// A model argument is a JSON file, or the name of a built-in model.
json model_ref(const std::string& arg)
{
    if (std::filesystem::exists(arg)) return fdem::to_json(fdem::load_model(arg));
    if (api::is_builtin_model(arg)) return arg;
    throw fdem::NotFoundError("model file \"" + arg + "\" does not exist");
}

void emit(const std::string& text, const std::string& out)
{
    if (out.empty() || out == "-") {
        std::cout << text;
        return;
    }
    std::ofstream f(out, std::ios::binary);
    if (!f) throw fdem::Error("cannot write " + out);
    f << text;
}

struct Target {
    std::string model;
    std::string device;
    std::string geometry;
    std::vector<double> heights;
    std::vector<double> frequencies;

    void add(CLI::App* app, bool with_model = true)
    {
        if (with_model) app->add_option("--model", model, "model JSON file or built-in name (M1, M2)")->required();
        auto* d = app->add_option("--device", device, "device name from the catalog");
        auto* g = app->add_option("--geometry", geometry, "geometry JSON file");
        d->excludes(g);
        app->add_option("--heights,--height", heights, "operating heights in m")->delimiter(',');
        app->add_option("--freqs,--freq", frequencies, "frequency override in Hz")->delimiter(',');
    }

    void fill(json& req) const
    {
        if (!model.empty()) req["model"] = model_ref(model);
        if (!device.empty()) req["device"] = device;
        if (!geometry.empty()) req["geometry"] = read_json_file(geometry);
        if (!heights.empty()) req["heights_m"] = heights;
        if (!frequencies.empty()) req["frequencies_Hz"] = frequencies;
    }
};

int fail(const std::exception& e, int code)
{
    std::cerr << api::render(api::error_json(e));
    return code;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Frequency-domain electromagnetic induction modelling, diagnostics and inversion"};
    app.require_subcommand(1);
    std::string store;
    app.add_option("--store", store, "device catalog file (default $FDEM_DATA_DIR/devices.json)");
    std::function<void()> run;

    auto catalog = [&store] {
        return fdem::DeviceCatalog::open(store.empty() ? fdem::DeviceCatalog::default_store()
                                                       : std::filesystem::path(store));
    };

    // forward
    auto* fwd = app.add_subcommand("forward", "compute responses, optionally swept over one axis");
    Target fwd_t;
    fwd_t.add(fwd);
    std::string height_sweep, freq_sweep, spacing_sweep, fwd_format = "csv", fwd_out;
    std::size_t points = 61;
    auto* hs = fwd->add_option("--height-sweep", height_sweep, "min:step:max in m");
    auto* fs = fwd->add_option("--freq-sweep", freq_sweep, "min:step:max or min:log:max in Hz");
    auto* ss = fwd->add_option("--spacing-sweep", spacing_sweep, "min:step:max in m");
    hs->excludes(fs)->excludes(ss);
    fs->excludes(ss);
    fwd->add_option("--points", points, "points of a log sweep")->capture_default_str();
    fwd->add_option("--format", fwd_format, "csv or json")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
    fwd->add_option("--out,-o", fwd_out, "output file (default stdout)");
    fwd->callback([&] {
        run = [&] {
            json req;
            fwd_t.fill(req);
            std::optional<std::pair<std::string, std::string>> sweep;
            if (!height_sweep.empty()) sweep.emplace("height", height_sweep);
            if (!freq_sweep.empty()) sweep.emplace("frequency", freq_sweep);
            if (!spacing_sweep.empty()) sweep.emplace("spacing", spacing_sweep);
            const auto cat = catalog();
            if (sweep) {
                req["axis"] = sweep->first;
                req["range"] = sweep->second;
                req["points"] = points;
                emit(fwd_format == "csv" ? api::sweep_csv(req, cat) : api::render(api::sweep(req, cat)), fwd_out);
            } else {
                emit(fwd_format == "csv" ? api::forward_csv(req, cat) : api::render(api::forward(req, cat)), fwd_out);
            }
        };
    });

    // diag
    auto* diag = app.add_subcommand("diag", "skin depth, induction numbers, sensitivity, cumulative response, DOI");
    diag->require_subcommand(1);
    Target diag_t;
    double cell = fdem::kSkinDepthCell;
    double grid_cell = 0.1, grid_depth = 15.0;
    std::string diag_format = "json", diag_out, component = "sigma_Q", sens_method = "analytic";
    std::optional<double> tau;
    std::vector<std::string> calibrate;

    auto diag_cmd = [&](const char* name, const char* help, const char* kind) {
        auto* sub = diag->add_subcommand(name, help);
        diag_t.add(sub);
        sub->add_option("--format", diag_format, "json or csv")->check(CLI::IsMember({"csv", "json"}));
        sub->add_option("--out,-o", diag_out, "output file (default stdout)");
        sub->callback([&, kind] {
            run = [&, kind] {
                json req = {{"kind", kind}};
                diag_t.fill(req);
                if (std::string(kind) == "skin" || std::string(kind) == "beta") {
                    req["cell_m"] = cell;
                } else {
                    req["cell_m"] = grid_cell;
                    req["max_depth_m"] = grid_depth;
                    req["component"] = component;
                    req["method"] = sens_method;
                }
                const auto cat = catalog();
                emit(diag_format == "csv" ? api::diagnostics_csv(req, cat) : api::render(api::diagnostics(req, cat)),
                     diag_out);
            };
        });
        return sub;
    };
    for (auto* sub : {diag_cmd("skin", "survey skin depth per frequency", "skin"),
                      diag_cmd("beta", "induction number per configuration", "beta")})
        sub->add_option("--cell", cell, "discretization cell in m (0: exact layering)")->capture_default_str();
    for (auto* sub : {diag_cmd("sensitivity", "sensitivity profiles", "sensitivity"),
                      diag_cmd("cumulative", "cumulative response curves", "cumulative")}) {
        sub->add_option("--grid-cell", grid_cell, "sensitivity cell in m")->capture_default_str();
        sub->add_option("--max-depth", grid_depth, "sensitivity grid depth in m")->capture_default_str();
        sub->add_option("--component", component, "sigma_Q, sigma_P, sigma_abs, mu_Q, mu_P, mu_abs")
            ->capture_default_str();
        sub->add_option("--method", sens_method, "analytic or fd")->capture_default_str();
    }

    auto* doi = diag->add_subcommand("doi", "depth of investigation per configuration");
    diag_t.add(doi);
    doi->add_option("--tau", tau, "cumulative threshold (default: calibrated constant)");
    doi->add_option("--calibrate", calibrate, "ORIENTATION,SPACING,TARGET: fit tau to one known DOI")
        ->delimiter(',')
        ->expected(3);
    doi->add_option("--component", component, "cumulative component")->capture_default_str();
    doi->add_option("--grid-cell", grid_cell, "sensitivity cell in m")->capture_default_str();
    doi->add_option("--max-depth", grid_depth, "sensitivity grid depth in m")->capture_default_str();
    doi->add_option("--out,-o", diag_out, "output file (default stdout)");
    doi->callback([&] {
        run = [&] {
            json req;
            diag_t.fill(req);
            req["component"] = component;
            req["cell_m"] = grid_cell;
            req["max_depth_m"] = grid_depth;
            if (tau) req["tau"] = *tau;
            if (!calibrate.empty()) {
                req["calibrate"] = {{"orientation", calibrate[0]},
                                    {"spacing_m", fdem::parse_number(calibrate[1])},
                                    {"target_m", fdem::parse_number(calibrate[2])}};
            }
            emit(api::render(api::doi(req, catalog())), diag_out);
        };
    });

    // synth
    auto* synth = app.add_subcommand("synth", "synthetic data set with seeded Gaussian noise");
    Target synth_t;
    synth_t.add(synth);
    double noise = 0.0;
    std::uint64_t seed = 0;
    std::string synth_out, synth_format = "csv";
    synth->add_option("--noise", noise, "relative noise level ||e||/||b||")->capture_default_str();
    synth->add_option("--seed", seed, "random seed")->capture_default_str();
    synth->add_option("--format", synth_format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    synth->add_option("--out,-o", synth_out, "output file (default stdout)");
    synth->callback([&] {
        run = [&] {
            json req = {{"noise", noise}, {"seed", seed}};
            synth_t.fill(req);
            const auto cat = catalog();
            emit(synth_format == "csv" ? api::synthesize_csv(req, cat)
                                       : api::render(api::to_json(api::synthesize(req, cat))),
                 synth_out);
        };
    });

    // invert
    auto* inv = app.add_subcommand("invert", "invert a response data set");
    std::string data_path, start_path, inv_out, method = "GN", mode = "sigma", reg = "I", data_component = "complex",
                                                jac = "analytic";
    double discrepancy = 0.0, safety = 1.1, step_tol = 1e-8, res_tol = 1e-9;
    std::optional<std::size_t> rank;
    std::size_t max_iter = 50, layers = 20;
    double layer_cell = 0.25;
    std::vector<double> thickness, profile;
    bool check_projector = false;
    inv->add_option("--data", data_path, "response CSV (as written by forward/synth) or JSON")->required();
    inv->add_option("--start", start_path, "starting model file or built-in name");
    inv->add_option("--method", method, "GN, MNGN, MNGN2_A, MNGN2_AB, MNGN2_ABD")->capture_default_str();
    inv->add_option("--mode", mode, "sigma or mu")->capture_default_str();
    inv->add_option("--reg", reg, "regularization operator: I, d1, d2")->capture_default_str();
    inv->add_option("--component", data_component, "Q, P or complex")->capture_default_str();
    inv->add_option("--jacobian", jac, "analytic or fd")->capture_default_str();
    inv->add_option("--discrepancy", discrepancy, "relative noise level for the discrepancy principle");
    inv->add_option("--safety", safety, "discrepancy safety factor")->capture_default_str();
    inv->add_option("--rank", rank, "fixed truncation rank (overrides the discrepancy principle)");
    inv->add_option("--max-iter", max_iter, "iteration limit")->capture_default_str();
    inv->add_option("--step-tol", step_tol, "relative step tolerance")->capture_default_str();
    inv->add_option("--residual-tol", res_tol, "relative residual tolerance")->capture_default_str();
    inv->add_option("--thickness", thickness, "layer thicknesses of the default start model in m")->delimiter(',');
    inv->add_option("--layers", layers, "layer count of the default start model")->capture_default_str();
    inv->add_option("--layer-cell", layer_cell, "layer thickness of the default start model in m")
        ->capture_default_str();
    inv->add_option("--profile", profile, "model profile, one value per layer")->delimiter(',');
    inv->add_flag("--check-projector", check_projector, "record projector identities at every iteration");
    inv->add_option("--out,-o", inv_out, "output file (default stdout)");
    inv->callback([&] {
        run = [&] {
            json req;
            const auto text = read_file(data_path);
            const auto first = text.find_first_not_of(" \t\r\n");
            if (first != std::string::npos && text[first] == '{')
                req["data"] = json::parse(text);
            else
                req["data_csv"] = text;
            if (!start_path.empty()) req["start"] = model_ref(start_path);
            if (!thickness.empty())
                req["thickness_m"] = thickness;
            else if (layers >= 1)
                req["thickness_m"] = std::vector<double>(layers - 1, layer_cell);
            req["options"] = {{"method", method},
                              {"mode", mode},
                              {"regularizer", reg},
                              {"component", data_component},
                              {"jacobian", jac},
                              {"rank", rank ? json(*rank) : json(nullptr)},
                              {"noise_level", discrepancy},
                              {"safety", safety},
                              {"max_iterations", max_iter},
                              {"step_tolerance", step_tol},
                              {"residual_tolerance", res_tol},
                              {"profile", profile},
                              {"check_projector", check_projector}};
            emit(api::render(api::invert(req)), inv_out);
        };
    });

    // devices
    auto* dev = app.add_subcommand("devices", "device catalog management");
    dev->require_subcommand(1);
    std::string dev_name, dev_file;
    bool force = false;
    dev->add_subcommand("list", "list all devices")->callback([&] {
        run = [&] { std::cout << api::render(api::devices(catalog())); };
    });
    auto* show = dev->add_subcommand("show", "show one device");
    show->add_option("name", dev_name, "device name")->required();
    show->callback([&] { run = [&] { std::cout << api::render(fdem::to_json(catalog().lookup(dev_name))); }; });
    auto* add = dev->add_subcommand("add", "insert or replace a device from a JSON file");
    add->add_option("file", dev_file, "device entry JSON")->required();
    add->callback([&] {
        run = [&] {
            auto entry = fdem::device_from_json(read_json_file(dev_file));
            entry.seed = false;
            auto cat = catalog();
            cat.upsert(entry);
            std::cout << api::render(fdem::to_json(cat.lookup(entry.name)));
        };
    });
    auto* rm = dev->add_subcommand("remove", "remove a device");
    rm->add_option("name", dev_name, "device name")->required();
    rm->add_flag("--force", force, "allow removing a built-in device");
    rm->callback([&] {
        run = [&] {
            auto cat = catalog();
            cat.remove(dev_name, force);
            std::cout << api::render(api::devices(cat));
        };
    });
    auto* reseed = dev->add_subcommand("reseed", "restore missing built-in devices");
    reseed->add_flag("--force", force, "also reset edited built-in devices");
    reseed->callback([&] {
        run = [&] {
            auto cat = catalog();
            cat.reseed(force);
            std::cout << api::render(api::devices(cat));
        };
    });

    // figures
    auto* figs = app.add_subcommand("figures", "write the survey-design figure and table data sets");
    std::string fig_dir = "figures";
    figs->add_option("--out,-o", fig_dir, "output directory")->capture_default_str();
    figs->callback([&] {
        run = [&] {
            for (const auto& f : fdem::write_figures(fig_dir)) std::cout << (std::filesystem::path(fig_dir) / f).string() << '\n';
        };
    });

    // serve
    auto* serve = app.add_subcommand("serve", "run the JSON-over-HTTP service");
    std::string host = "127.0.0.1";
    int port = 8080;
    serve->add_option("--host", host, "bind address")->capture_default_str();
    serve->add_option("--port", port, "TCP port")->capture_default_str();
    serve->callback([&] {
        run = [&] {
            fdem::Service service(catalog());
            std::cerr << "listening on http://" << host << ':' << port << '\n';
            if (!service.listen(host, port)) throw fdem::Error("cannot bind " + host + ":" + std::to_string(port));
        };
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        std::cerr << api::render({{"error", {{"type", "usage"}, {"message", e.what()}, {"issues", json::array()}}}});
        return 2;
    }

    try {
        if (run) run();
    } catch (const fdem::SchemaError& e) {
        return fail(e, 2);
    } catch (const fdem::ValidationError& e) {
        return fail(e, 2);
    } catch (const json::exception& e) {
        return fail(e, 2);
    } catch (const fdem::NotFoundError& e) {
        return fail(e, 3);
    } catch (const std::exception& e) {
        return fail(e, 1);
    }
    return 0;
}
