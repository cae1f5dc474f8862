#include <catch_amalgamated.hpp>

#include <limits>
#include <random>

#include "fdem/csv.hpp"
#include "fdem/error.hpp"

using namespace fdem;

namespace {

const LayeredEarth kM1{{0.1, 0.001, 0.01}, {1.0, 1.01, 1.005}, {1.5, 1.0}};

}  // namespace

TEST_CASE("numbers use the shortest round-trip form")
{
    CHECK(format_number(0.15) == "0.15");
    CHECK(format_number(9000.0) == "9000");
    CHECK(format_number(-2.5e-7) == "-2.5e-07");
    CHECK(format_number(0.0) == "0");
    CHECK(format_number(-0.0) == "0");
    CHECK(format_number(std::numeric_limits<double>::infinity()) == "inf");
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-30.0, 30.0);
    for (int i = 0; i < 1000; ++i) {
        const double v = std::pow(10.0, u(rng)) * (i % 2 ? -1.0 : 1.0);
        REQUIRE(parse_number(format_number(v)) == v);
    }
    CHECK_THROWS_AS(parse_number("1,5"), SchemaError);
    CHECK(parse_number(" +2.5 ") == 2.5);
}

TEST_CASE("CSV tables quote when needed and parse back")
{
    CsvTable t;
    t.header = {"name", "value"};
    t.add_row({"plain", "1"});
    t.add_row({"with, comma", "2"});
    t.add_row({"with \"quote\"", "3"});
    const auto text = t.str();
    CHECK(text.starts_with("name,value\nplain,1\n\"with, comma\",2\n"));
    const auto back = parse_csv(text);
    CHECK(back.header == t.header);
    CHECK(back.rows == t.rows);
    CHECK(back.column("value") == 1);
    CHECK_THROWS_AS(back.column("missing"), SchemaError);
    CHECK_THROWS_AS(parse_csv("a,b\n1\n"), SchemaError);
    CHECK_THROWS_AS(parse_csv(""), SchemaError);
    CHECK(parse_csv("a,b\r\n1,2\r\n").rows.front() == std::vector<std::string>{"1", "2"});
    CHECK_THROWS(t.add_row({"x"}));
}

TEST_CASE("response CSV layout")
{
    MeasurementGeometry g;
    g.orientations = {Orientation::HCP, Orientation::PERP};
    g.spacings_m = {{0.5, 1.0}, {0.6, 1.1}};
    g.frequencies_hz = {9000.0};
    g.heights_m = {0.0, 0.9};
    const auto set = response_batch(kM1, g);
    const auto text = response_csv(set, {});
    const auto t = parse_csv(text);
    CHECK(t.header == kResponseColumns);
    CHECK(text.starts_with("orientation,spacing_m,frequency_Hz,height_m,Q_raw,P_raw,Q_mS_per_m,P_device_unit\n"));
    REQUIRE(t.rows.size() == 8);
    CHECK(t.rows[1][0] == "HCP");
    CHECK(t.rows[1][3] == "0.9");
    CHECK(t.rows[7][1] == "1.1");
    CHECK(parse_number(t.rows[2][4]) == set.values[2].imag());
    CHECK(parse_number(t.rows[2][5]) == set.values[2].real());
    CHECK(parse_number(t.rows[2][7]) == Catch::Approx(1e3 * set.values[2].real()));
}

TEST_CASE("response CSV reads back bit for bit")
{
    MeasurementGeometry g;
    g.orientations = {Orientation::HCP, Orientation::VCP};
    g.spacings_m = {{1.66}, {1.66}};
    g.frequencies_hz = {1275.0, 4250.0, 12525.0};
    g.heights_m = {0.2, 0.9};
    const auto set = response_batch(kM1, g);
    const auto back = read_response_csv(response_csv(set, {QuadratureUnit::PartsPerMillion, InPhaseUnit::PartsPerMillion}));
    CHECK(back.geometry == set.geometry);
    CHECK(back.values == set.values);

    // Axes are rebuilt in order of first appearance; every measurement keeps
    // its value whatever the row order. Missing and duplicate rows are errors.
    auto t = response_table(set, {});
    std::reverse(t.rows.begin(), t.rows.end());
    const auto shuffled = read_response_csv(t.str());
    CHECK(shuffled.geometry.heights_m == std::vector<double>{0.9, 0.2});
    CHECK(shuffled.geometry.orientations.front() == set.geometry.orientations.back());
    REQUIRE(shuffled.size() == set.size());
    for (std::size_t i = 0; i < set.size(); ++i) CHECK(shuffled.values[set.size() - 1 - i] == set.values[i]);
    t.rows.pop_back();
    CHECK_THROWS_AS(read_response_csv(t.str()), ValidationError);
    t = response_table(set, {});
    t.rows.push_back(t.rows.front());
    CHECK_THROWS_AS(read_response_csv(t.str()), ValidationError);
}

TEST_CASE("sensitivity CSV layout")
{
    const auto p = sensitivity_analytic(kM1, {Orientation::HCP, 1.0, 9000.0, 0.9});
    const auto text = sensitivity_csv(p, cumulative_response(p));
    const auto t = parse_csv(text);
    CHECK(text.starts_with("depth_m,Re(S_sigma),Im(S_sigma),Re(S_mu),Im(S_mu),cumulative\n"));
    REQUIRE(t.rows.size() == 150);
    CHECK(t.rows.front()[0] == "0");
    CHECK(t.rows[15][0] == "1.5");
    CHECK(t.rows.back()[5] == "1");
}

TEST_CASE("G(beta) sweep")
{
    const auto betas = log_space(1e-2, 1e2, 5);
    CHECK(betas == std::vector<double>{0.01, 0.1, 1.0, 10.0, 100.0});
    const auto t = g_beta_table(betas);
    CHECK(t.header == std::vector<std::string>{"beta", "Re_G", "Im_G", "abs_G"});
    CHECK(t.rows[2] == std::vector<std::string>{"1", "0.5", "0.5", format_number(std::sqrt(0.5))});
    CHECK_THROWS_AS(log_space(0.0, 1.0, 5), ValidationError);
}
