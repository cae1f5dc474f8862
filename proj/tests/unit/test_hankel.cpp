#include <catch_amalgamated.hpp>

#include <cmath>
#include <filesystem>

#include "fdem/error.hpp"
#include "fdem/hankel.hpp"

using namespace fdem;

namespace {

double rel(cplx got, double want) { return std::abs(got - want) / std::abs(want); }

std::vector<double> grid(double lo, double hi, int n)
{
    std::vector<double> v;
    for (int i = 0; i < n; ++i) v.push_back(lo * std::pow(hi / lo, i / double(n - 1)));
    return v;
}

}  // namespace

TEST_CASE("Lipschitz integral examples")
{
    const double a = 1.8;
    const auto j0 = hankel_transform([&](double l) { return cplx(std::exp(-a * l)); }, 0, 1.0);
    CHECK(j0.real() == Catch::Approx(0.485643).margin(1e-6));
    CHECK(rel(j0, 1.0 / std::sqrt(a * a + 1.0)) < 1e-6);

    const auto l2 = hankel_transform([](double l) { return cplx(l * l * std::exp(-l)); }, 0, 1.0);
    CHECK(l2.real() == Catch::Approx(0.176777).margin(1e-6));
    CHECK(rel(l2, 1.0 / std::pow(2.0, 2.5)) < 1e-6);

    CHECK(hankel_transform([](double) { return cplx(0.0); }, 0, 2.0) == cplx(0.0));
    CHECK(hankel_transform([](double) { return cplx(0.0); }, 1, 2.0) == cplx(0.0));
}

TEST_CASE("closed-form pairs over the acceptance box")
{
    double worst0 = 0.0;
    double worst1 = 0.0;
    double worst2 = 0.0;
    for (double a : grid(0.1, 5.0, 25)) {
        for (double rho : grid(0.1, 10.0, 25)) {
            const double r2 = a * a + rho * rho;
            const auto e = [a](double l) { return cplx(std::exp(-a * l)); };
            worst0 = std::max(worst0, rel(hankel_transform(e, 0, rho), 1.0 / std::sqrt(r2)));
            worst1 = std::max(worst1, rel(hankel_transform(e, 1, rho), (1.0 - a / std::sqrt(r2)) / rho));
            // The lambda^2 pair changes sign at rho = sqrt(2) a; its error is
            // measured against the size of the integrand's transform scale.
            const double exact2 = (2.0 * a * a - rho * rho) / std::pow(r2, 2.5);
            const auto got2 = hankel_transform([a](double l) { return cplx(l * l * std::exp(-a * l)); }, 0, rho);
            worst2 = std::max(worst2, std::abs(got2 - exact2) / std::max(std::abs(exact2), std::pow(r2, -1.5)));
        }
    }
    CHECK(worst0 < 1e-6);
    CHECK(worst1 < 1e-6);
    CHECK(worst2 < 1e-6);
}

TEST_CASE("transform is linear")
{
    const double rho = 1.3;
    const auto f = [](double l) { return cplx(std::exp(-0.7 * l), 0.3 * std::exp(-2.0 * l)); };
    const auto g = [](double l) { return cplx(l * std::exp(-1.1 * l)); };
    const cplx alpha(2.0, -1.0);
    const double beta = -0.5;
    for (int order : {0, 1}) {
        const auto lhs = hankel_transform([&](double l) { return alpha * f(l) + beta * g(l); }, order, rho);
        const auto rhs = alpha * hankel_transform(f, order, rho) + beta * hankel_transform(g, order, rho);
        CHECK(std::abs(lhs - rhs) <= 1e-14 * (1.0 + std::abs(rhs)));
    }
}

TEST_CASE("non-finite kernel values report the node")
{
    const auto& filter = HankelFilter::standard(0);
    const double rho = 2.0;
    const double cut = filter.nodes(rho)[100];
    try {
        (void)filter.transform([&](double l) { return l >= cut ? cplx(std::nan("")) : cplx(1.0); }, rho);
        FAIL("expected a quadrature error");
    } catch (const QuadratureError& e) {
        CHECK(e.node() == 100);
        CHECK(e.lambda() == Catch::Approx(cut));
    }
    CHECK_THROWS_AS(filter.transform([](double) { return cplx(1.0); }, 0.0), Error);
}

TEST_CASE("shipped filters are well formed")
{
    for (int order : {0, 1}) {
        const auto& f = HankelFilter::standard(order);
        CHECK(f.order() == order);
        CHECK(f.size() >= 100);
        const auto nodes = f.nodes(1.7);
        for (std::size_t i = 1; i < nodes.size(); ++i) REQUIRE(nodes[i] > nodes[i - 1]);
        CHECK(nodes.front() > 0.0);
        const auto loaded = HankelFilter::load(
            std::filesystem::path(FDEM_SOURCE_DIR) / (order == 0 ? "data/hankel/fdem_j0_v1.txt"
                                                                  : "data/hankel/fdem_j1_v1.txt"),
            order);
        REQUIRE(loaded.size() == f.size());
        for (std::size_t i = 0; i < f.size(); ++i) {
            REQUIRE(loaded.weights()[i] == f.weights()[i]);
            REQUIRE(loaded.exponents()[i] == f.exponents()[i]);
        }
    }
}

TEST_CASE("filter text parsing and invariants")
{
    const auto f = HankelFilter::parse("# test table\n-1.0 0.5\n0.0 0.25\n\n1.0 0.125\n", 0, "tiny");
    CHECK(f.size() == 3);
    CHECK(f.name() == "tiny");
    CHECK(f.apply(std::vector<cplx>{1.0, 1.0, 1.0}, 2.0) == cplx(0.4375));
    CHECK_THROWS(HankelFilter(0, {0.0, 1.0}, {1.0}));
    CHECK_THROWS(HankelFilter(0, {1.0, 0.0}, {1.0, 1.0}));
    CHECK_THROWS(HankelFilter(2, {0.0}, {1.0}));
    CHECK_THROWS(HankelFilter::parse("0.0 abc\n", 0));
}
