#include <catch_amalgamated.hpp>

#include <chrono>
#include <thread>

#include "fdem/api.hpp"
#include "fdem/csv.hpp"
#include "fdem/service.hpp"

#include <httplib.h>

using namespace fdem;
using nlohmann::json;

namespace {

const json kForward = {{"model", "M1"}, {"device", "Dualem-21H"}, {"heights_m", {0.9}}};

json poll_job(Service& svc, const std::string& id)
{
    for (int i = 0; i < 600; ++i) {
        const auto r = svc.handle("GET", "/jobs/" + id, "");
        REQUIRE(r.status == 200);
        auto doc = json::parse(r.body);
        if (doc.at("status") == "done" || doc.at("status") == "failed") return doc;
        std::this_thread::sleep_for(std::chrono::milliseconds(50));
    }
    FAIL("job did not finish");
    return {};
}

}  // namespace

TEST_CASE("service replies mirror the library documents")
{
    const auto catalog = DeviceCatalog::seed_defaults();
    Service svc(catalog);
    const auto r = svc.handle("POST", "/forward", kForward.dump());
    CHECK(r.status == 200);
    CHECK(r.content_type == "application/json");
    CHECK(r.body == api::render(api::forward(kForward, catalog)));

    json csv = kForward;
    csv["format"] = "csv";
    const auto c = svc.handle("POST", "/forward", csv.dump());
    CHECK(c.content_type == "text/csv");
    CHECK(c.body == api::forward_csv(kForward, catalog));

    const json sweep = {{"model", "M2"}, {"device", "CMD Explorer"}, {"axis", "height"}, {"range", "0:0.5:3"}};
    CHECK(svc.handle("POST", "/sweep", sweep.dump()).body == api::render(api::sweep(sweep, catalog)));

    const json diag = {{"kind", "skin"}, {"model", "M1"}, {"device", "GEM-2"}};
    CHECK(svc.handle("POST", "/diagnostics", diag.dump()).body == api::render(api::diagnostics(diag, catalog)));
    CHECK(svc.handle("POST", "/doi", kForward.dump()).body == api::render(api::doi(kForward, catalog)));
}

TEST_CASE("service error statuses")
{
    Service svc(DeviceCatalog::seed_defaults());
    const auto bad_json = svc.handle("POST", "/forward", "{not json");
    CHECK(bad_json.status == 400);
    CHECK(json::parse(bad_json.body).at("error").at("type") == "schema");

    CHECK(svc.handle("POST", "/forward", R"({"model": "M1"})").status == 400);

    const json invalid = {{"model", {{"sigma_S_per_m", {-1.0}}, {"mu_r", {1.0}}, {"thickness_m", json::array()}}},
                          {"device", "GEM-2"},
                          {"heights_m", {0}}};
    const auto v = svc.handle("POST", "/forward", invalid.dump());
    CHECK(v.status == 422);
    CHECK_FALSE(json::parse(v.body).at("error").at("issues").empty());

    const json empty_range = {{"model", "M1"}, {"device", "GEM-2"}, {"axis", "height"}, {"range", "3:0.1:1"}};
    CHECK(svc.handle("POST", "/sweep", empty_range.dump()).status == 422);

    CHECK(svc.handle("POST", "/forward", R"({"model": "M1", "device": "Nope", "heights_m": [0]})").status == 404);
    CHECK(svc.handle("GET", "/jobs/job-99", "").status == 404);
    CHECK(svc.handle("DELETE", "/devices", "").status == 404);
    CHECK(svc.handle("POST", "/nowhere", "{}").status == 404);
}

TEST_CASE("device catalogue over the service")
{
    Service svc(DeviceCatalog::seed_defaults());
    auto list = json::parse(svc.handle("GET", "/devices", "").body);
    CHECK(list.at("devices").size() == 9);

    auto entry = to_json(DeviceCatalog::seed_defaults().lookup("EM38-MK2"));
    entry["name"] = "EM38-Custom";
    const auto put = svc.handle("PUT", "/devices", entry.dump());
    CHECK(put.status == 200);
    CHECK(json::parse(put.body).at("seed") == false);
    list = json::parse(svc.handle("GET", "/devices", "").body);
    CHECK(list.at("devices").size() == 10);

    entry["configurations"] = json::array();
    CHECK(svc.handle("PUT", "/devices", entry.dump()).status == 422);

    const json fwd = {{"model", "M1"}, {"device", "EM38-Custom"}, {"heights_m", {0}}};
    CHECK(svc.handle("POST", "/forward", fwd.dump()).status == 200);
}

TEST_CASE("asynchronous inversion jobs")
{
    const auto catalog = DeviceCatalog::seed_defaults();
    Service svc(catalog);
    const json synth = {{"model", "M1"}, {"device", "Dualem-21H"}, {"heights_m", {0.9}}};
    json req = {{"data_csv", api::synthesize_csv(synth, catalog)},
                {"start", {{"sigma_S_per_m", {0.05, 0.05, 0.05}}, {"mu_r", {1.0, 1.01, 1.005}}, {"thickness_m", {1.5, 1.0}}}},
                {"options", {{"method", "GN"}, {"max_iterations", 5}}}};
    const auto queued = svc.handle("POST", "/invert", req.dump());
    REQUIRE(queued.status == 202);
    const auto ticket = json::parse(queued.body);
    CHECK(ticket.at("href") == "/jobs/" + ticket.at("id").get<std::string>());

    const auto done = poll_job(svc, ticket.at("id"));
    CHECK(done.at("status") == "done");
    CHECK(done.at("result") == api::invert(req));

    req["sync"] = true;
    const auto sync = svc.handle("POST", "/invert", req.dump());
    CHECK(sync.status == 200);
    CHECK(json::parse(sync.body) == done.at("result"));

    req.erase("sync");
    req["data_csv"] = "orientation\n";
    CHECK(svc.handle("POST", "/invert", req.dump()).status == 400);
}

TEST_CASE("HTTP round trip")
{
    const auto catalog = DeviceCatalog::seed_defaults();
    Service svc(catalog);
    const int port = svc.bind_any_port("127.0.0.1");
    REQUIRE(port > 0);
    std::thread server([&] { svc.listen_after_bind(); });

    httplib::Client client("127.0.0.1", port);
    client.set_read_timeout(30, 0);
    auto res = client.Post("/forward", kForward.dump(), "application/json");
    for (int i = 0; !res && i < 50; ++i) {
        std::this_thread::sleep_for(std::chrono::milliseconds(20));
        res = client.Post("/forward", kForward.dump(), "application/json");
    }
    REQUIRE(res);
    CHECK(res->status == 200);
    CHECK(res->body == api::render(api::forward(kForward, catalog)));

    const auto devices = client.Get("/devices");
    REQUIRE(devices);
    CHECK(json::parse(devices->body).at("devices").size() == 9);

    const auto missing = client.Get("/nowhere");
    REQUIRE(missing);
    CHECK(missing->status == 404);
    CHECK(json::parse(missing->body).at("error").at("type") == "not_found");

    svc.stop();
    server.join();
}
