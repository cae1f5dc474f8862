#include <catch_amalgamated.hpp>

#include <filesystem>

#include "fdem/devices.hpp"
#include "fdem/error.hpp"

using namespace fdem;

namespace {

std::filesystem::path fresh_store(const std::string& name)
{
    const auto dir = std::filesystem::temp_directory_path() / "fdem_test_devices";
    std::filesystem::create_directories(dir);
    const auto path = dir / name;
    std::filesystem::remove(path);
    return path;
}

DeviceEntry custom()
{
    DeviceEntry e;
    e.manufacturer = "Acme Geophysics";
    e.name = "Prototype-3";
    e.configurations = {{Orientation::HCP, {0.8, 1.6, 3.2}}, {Orientation::VCP, {0.8, 1.6, 3.2}}};
    e.frequency_hz = 15000.0;
    return e;
}

}  // namespace

TEST_CASE("seed catalog holds the nine reference instruments")
{
    const auto c = DeviceCatalog::seed_defaults();
    REQUIRE(c.list().size() == 9);
    for (const char* name : {"CMD Mini-Explorer", "CMD Explorer", "CMD DUO", "Dualem-21", "Dualem-21H", "Dualem-421",
                             "EM38-MK2", "EM31-MK2", "GEM-2"})
        CHECK(c.contains(name));

    const auto& d = c.lookup("Dualem-21H");
    REQUIRE(d.configurations.size() == 2);
    CHECK(d.configurations[1].orientation == Orientation::PERP);
    CHECK(d.configurations[1].spacings_m == std::vector<double>{0.6, 1.1, 2.1});
    CHECK(d.frequency_hz == 9000.0);

    const auto& gem = c.lookup("GEM-2");
    REQUIRE(gem.frequency_range_hz);
    CHECK(gem.frequency_range_hz->first == 30.0);
    CHECK(gem.frequency_range_hz->second == 93000.0);
    CHECK(gem.default_frequencies_hz == std::vector<double>{1275.0, 4250.0, 12525.0, 28725.0, 54150.0, 82150.0});
    CHECK(gem.units.q == QuadratureUnit::PartsPerMillion);
    CHECK(gem.units.p == InPhaseUnit::PartsPerMillion);

    const auto& em31 = c.lookup("EM31-MK2");
    REQUIRE(em31.configurations.size() == 1);
    CHECK(em31.configurations[0].orientation == Orientation::HCP);
    CHECK(em31.configurations[0].spacings_m == std::vector<double>{3.66});

    CHECK(c.lookup("CMD DUO").frequency_hz == 925.0);
    CHECK(c.lookup("CMD Explorer").units.q == QuadratureUnit::MilliSiemensPerMetre);
    CHECK(c.lookup("EM38-MK2").configurations[1].orientation == Orientation::VCP);
}

TEST_CASE("catalog is sorted by manufacturer then name")
{
    auto c = DeviceCatalog::seed_defaults();
    c.upsert(custom());
    const auto& l = c.list();
    for (std::size_t i = 1; i < l.size(); ++i)
        REQUIRE(std::tie(l[i - 1].manufacturer, l[i - 1].name) < std::tie(l[i].manufacturer, l[i].name));
    CHECK(l.front().name == "Prototype-3");
}

TEST_CASE("device geometry expands configurations")
{
    const auto c = DeviceCatalog::seed_defaults();
    const auto g = c.lookup("GEM-2").geometry({0.2, 0.9});
    CHECK(g.size() == 2 * 1 * 6 * 2);
    const auto single = c.lookup("GEM-2").geometry({0.9}, std::vector<double>{5000.0});
    CHECK(single.frequencies_hz == std::vector<double>{5000.0});
    CHECK(c.lookup("Dualem-21H").geometry({0.9}).spacings_m[1].back() == 2.1);
}

TEST_CASE("upsert validates entries")
{
    auto c = DeviceCatalog::seed_defaults();
    auto bad = custom();
    bad.configurations[0].spacings_m = {-0.5, 1.0, 2.0};
    CHECK_THROWS_AS(c.upsert(bad), ValidationError);
    bad = custom();
    bad.configurations[0].spacings_m = {2.0, 1.0, 3.0};
    CHECK_THROWS_AS(c.upsert(bad), ValidationError);
    bad = custom();
    bad.configurations[1].spacings_m = {1.0};
    CHECK_THROWS_AS(c.upsert(bad), ValidationError);
    bad = custom();
    bad.frequency_hz = 0.0;
    CHECK_THROWS_AS(c.upsert(bad), ValidationError);
    bad = custom();
    bad.frequency_hz.reset();
    bad.frequency_range_hz = std::make_pair(1000.0, 100.0);
    bad.default_frequencies_hz = {500.0};
    CHECK_THROWS_AS(c.upsert(bad), ValidationError);
    CHECK(c.list().size() == 9);
}

TEST_CASE("remove and reseed")
{
    auto c = DeviceCatalog::seed_defaults();
    CHECK_THROWS_AS(c.remove("Nope"), NotFoundError);
    CHECK_THROWS_AS(c.remove("GEM-2"), ValidationError);
    c.remove("GEM-2", true);
    CHECK_FALSE(c.contains("GEM-2"));

    auto edited = c.lookup("EM31-MK2");
    edited.frequency_hz = 9900.0;
    c.upsert(edited);
    c.upsert(custom());
    c.reseed();
    CHECK(c.contains("GEM-2"));
    CHECK(c.lookup("EM31-MK2").frequency_hz == 9900.0);  // user edit survives
    CHECK(c.contains("Prototype-3"));
    const auto once = c;
    c.reseed();
    CHECK(c == once);
    c.reseed(true);
    CHECK(c.lookup("EM31-MK2").frequency_hz == 9800.0);
    CHECK(c.contains("Prototype-3"));
    c.remove("Prototype-3");
    CHECK_FALSE(c.contains("Prototype-3"));
}

TEST_CASE("JSON store round trip and persistence")
{
    auto c = DeviceCatalog::seed_defaults();
    c.upsert(custom());
    CHECK(DeviceCatalog::from_json(c.to_json()) == c);
    CHECK(DeviceCatalog::from_json(nlohmann::json::parse(c.to_json().dump())) == c);

    const auto path = fresh_store("devices.json");
    {
        auto opened = DeviceCatalog::open(path);
        CHECK(std::filesystem::exists(path));
        CHECK(opened == DeviceCatalog::seed_defaults());
        opened.upsert(custom());
    }
    const auto reopened = DeviceCatalog::open(path);
    CHECK(reopened.contains("Prototype-3"));
    CHECK(reopened.list().size() == 10);
    CHECK_THROWS_AS(DeviceCatalog::from_json(nlohmann::json::parse(R"({"devices": 3})")), SchemaError);
}

TEST_CASE("entry JSON errors")
{
    auto doc = to_json(custom());
    CHECK(device_from_json(doc) == custom());
    doc.erase("name");
    CHECK_THROWS_AS(device_from_json(doc), SchemaError);
    doc = to_json(custom());
    doc["configurations"][0]["orientation"] = "XYZ";
    CHECK_THROWS_AS(device_from_json(doc), SchemaError);
}
