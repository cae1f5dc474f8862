#include <catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <random>

#include "fdem/earth_model.hpp"
#include "fdem/error.hpp"
#include "fdem/geometry.hpp"

using namespace fdem;

namespace {

const LayeredEarth kM1{{0.1, 0.001, 0.01}, {1.0, 1.01, 1.005}, {1.5, 1.0}};

std::filesystem::path scratch(const std::string& name)
{
    auto dir = std::filesystem::temp_directory_path() / "fdem_test_earth_model";
    std::filesystem::create_directories(dir);
    return dir / name;
}

}  // namespace

TEST_CASE("reference model and half-space are valid")
{
    CHECK(validate(kM1).empty());
    CHECK(validate(LayeredEarth{{0.1}, {1.0}, {}}).empty());
    CHECK(validate(LayeredEarth::homogeneous(0.0)).empty());
}

TEST_CASE("negative thickness is reported")
{
    const LayeredEarth bad{{0.1, 0.2}, {1.0, 1.0}, {-1.0}};
    const auto issues = validate(bad);
    REQUIRE(issues.size() == 1);
    CHECK(issues.front() == "thickness must be positive");
    CHECK_THROWS_AS(require_valid(bad), ValidationError);
}

TEST_CASE("shape and sign violations are listed")
{
    CHECK_FALSE(validate(LayeredEarth{{}, {}, {}}).empty());
    CHECK_FALSE(validate(LayeredEarth{{0.1, 0.2}, {1.0}, {1.0}}).empty());
    CHECK_FALSE(validate(LayeredEarth{{0.1, 0.2}, {1.0, 1.0}, {}}).empty());
    CHECK_FALSE(validate(LayeredEarth{{-0.1}, {1.0}, {}}).empty());
    CHECK_FALSE(validate(LayeredEarth{{0.1}, {0.0}, {}}).empty());
    CHECK_FALSE(validate(LayeredEarth{{std::nan("")}, {1.0}, {}}).empty());
}

TEST_CASE("depths accumulate thicknesses")
{
    CHECK(kM1.depths() == std::vector<double>{0.0, 1.5, 2.5});
    CHECK(kM1.mu(1) == Catch::Approx(1.01 * kMu0));
}

TEST_CASE("model files round-trip field for field")
{
    const auto path = scratch("m1.json");
    save_model(kM1, path);
    CHECK(load_model(path) == kM1);
}

TEST_CASE("random valid models round-trip losslessly")
{
    std::mt19937_64 rng(1234);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        const auto n = 1 + static_cast<std::size_t>(u(rng) * 8);
        LayeredEarth m;
        for (std::size_t k = 0; k < n; ++k) {
            m.sigma.push_back(std::pow(10.0, -4.0 + 5.0 * u(rng)));
            m.mu_r.push_back(1.0 + u(rng) * 0.1);
            if (k + 1 < n) m.thickness.push_back(0.01 + 3.0 * u(rng));
        }
        REQUIRE(model_from_json(to_json(m)) == m);
        REQUIRE(model_from_json(nlohmann::json::parse(to_json(m).dump())) == m);
    }
}

TEST_CASE("schema errors for malformed model documents")
{
    CHECK_THROWS_AS(model_from_json(nlohmann::json::parse(R"({"mu_r":[1],"thickness_m":[]})")), SchemaError);
    CHECK_THROWS_AS(model_from_json(nlohmann::json::parse(R"({"sigma_S_per_m":"x","mu_r":[1],"thickness_m":[]})")),
                    SchemaError);
    CHECK_THROWS_AS(model_from_json(nlohmann::json::parse("[1,2]")), SchemaError);
    const auto path = scratch("broken.json");
    std::ofstream(path) << "{ not json";
    CHECK_THROWS_AS(load_model(path), SchemaError);
}

TEST_CASE("invariant violations in files are validation errors")
{
    CHECK_THROWS_AS(
        model_from_json(nlohmann::json::parse(R"({"sigma_S_per_m":[1,1],"mu_r":[1,1],"thickness_m":[-1]})")),
        ValidationError);
}

TEST_CASE("shipped M2 differs from M1 only in the middle conductivity")
{
    const auto m1 = load_model(std::filesystem::path(FDEM_SOURCE_DIR) / "data/models/M1.json");
    const auto m2 = load_model(std::filesystem::path(FDEM_SOURCE_DIR) / "data/models/M2.json");
    CHECK(m1 == kM1);
    CHECK(m2.sigma == std::vector<double>{0.1, 2.0, 0.01});
    CHECK(m2.mu_r == m1.mu_r);
    CHECK(m2.thickness == m1.thickness);
}

TEST_CASE("discretize samples cell midpoints")
{
    const auto d = discretize(kM1, 0.5, 3.0);
    REQUIRE(d.layers() == 7);
    CHECK(d.sigma == std::vector<double>{0.1, 0.1, 0.1, 0.001, 0.001, 0.01, 0.01});
    CHECK(d.thickness == std::vector<double>(6, 0.5));
    CHECK(validate(d).empty());

    // A boundary exactly at a cell midpoint belongs to the upper layer.
    const LayeredEarth two{{1.0, 2.0}, {1.0, 1.0}, {0.25}};
    const auto t = discretize(two, 0.5, 1.0);
    CHECK(t.sigma.front() == 1.0);
    CHECK_THROWS_AS(discretize(kM1, 0.0, 1.0), ValidationError);
}

TEST_CASE("lexicographic index map is a bijection")
{
    MeasurementGeometry g;
    g.orientations = {Orientation::HCP, Orientation::PERP};
    g.spacings_m = {{0.5, 1.0, 2.0}, {0.6, 1.1, 2.1}};
    g.frequencies_hz = {9000.0, 18000.0};
    g.heights_m = {0.0, 0.5, 0.9, 1.2};
    require_valid(g);
    REQUIRE(g.size() == 2 * 3 * 2 * 4);
    std::vector<bool> seen(g.size(), false);
    for (std::size_t o = 0; o < 2; ++o)
        for (std::size_t s = 0; s < 3; ++s)
            for (std::size_t f = 0; f < 2; ++f)
                for (std::size_t h = 0; h < 4; ++h) {
                    const MeasurementGeometry::Index idx{o, s, f, h};
                    const auto k = g.flat_index(idx);
                    REQUIRE(k < g.size());
                    REQUIRE_FALSE(seen[k]);
                    seen[k] = true;
                    REQUIRE(g.unflatten(k) == idx);
                }
    // Height varies fastest, orientation slowest.
    CHECK(g.flat_index({0, 0, 0, 1}) == 1);
    CHECK(g.flat_index({1, 0, 0, 0}) == 24);
    const auto m = g.at(g.flat_index({1, 2, 0, 2}));
    CHECK(m.orientation == Orientation::PERP);
    CHECK(m.spacing_m == 2.1);
    CHECK(m.height_m == 0.9);
}

TEST_CASE("geometry JSON round trip and validation")
{
    auto g = MeasurementGeometry::uniform({Orientation::HCP, Orientation::VCP}, {1.48, 2.82}, {10000.0}, {0.9});
    CHECK(geometry_from_json(to_json(g)) == g);
    CHECK(to_json(g).at("spacings_m").at(0).is_number());
    g.spacings_m[1] = {1.5, 2.9};
    CHECK(to_json(g).at("spacings_m").at(0).is_array());
    CHECK(geometry_from_json(to_json(g)) == g);

    g.heights_m = {-0.1};
    CHECK_THROWS_AS(require_valid(g), ValidationError);
    CHECK_THROWS_AS(parse_orientation("XYZ"), SchemaError);
    CHECK(parse_orientation("PERP") == Orientation::PERP);
}
