#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "csde/quadrature.hpp"

using namespace csde;

TEST_CASE("gauss-legendre integrates polynomials of degree 2n-1 exactly") {
    const QuadRule& rule = gauss_legendre(5);
    REQUIRE(rule.nodes.size() == 5);
    for (int deg : {0, 2, 4, 6, 8}) {
        double got = 0.0;
        for (std::size_t i = 0; i < rule.nodes.size(); ++i)
            got += rule.weights[i] * std::pow(rule.nodes[i], deg);
        CHECK(got == doctest::Approx(2.0 / (deg + 1)).epsilon(1e-13));
    }
    double odd = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i)
        odd += rule.weights[i] * std::pow(rule.nodes[i], 3);
    CHECK(std::abs(odd) < 1e-14);
}

TEST_CASE("gauss-legendre n=2 nodes are +-1/sqrt(3)") {
    const QuadRule& rule = gauss_legendre(2);
    CHECK(std::abs(rule.nodes[0] + 1.0 / std::sqrt(3.0)) < 1e-14);
    CHECK(std::abs(rule.nodes[1] - 1.0 / std::sqrt(3.0)) < 1e-14);
    CHECK(rule.weights[0] == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("gauss-hermite normalization and moments") {
    const QuadRule& rule = gauss_hermite(32);
    double total = 0.0, second = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        total += rule.weights[i];
        second += rule.weights[i] * rule.nodes[i] * rule.nodes[i];
    }
    CHECK(total == doctest::Approx(std::sqrt(M_PI)).epsilon(1e-12));
    CHECK(second == doctest::Approx(0.5 * std::sqrt(M_PI)).epsilon(1e-12));
}

TEST_CASE("gaussian expectations") {
    CHECK(gauss_expectation([](double z) { return z * z; }, 0.0, 1.0) ==
          doctest::Approx(1.0).epsilon(1e-12));
    CHECK(gauss_expectation([](double z) { return z * z * z * z; }, 0.0, 1.0) ==
          doctest::Approx(3.0).epsilon(1e-12));
    CHECK(gauss_expectation([](double z) { return std::exp(z); }, 0.0, 1.0) ==
          doctest::Approx(std::exp(0.5)).epsilon(1e-12));
    CHECK(gauss_expectation([](double z) { return std::exp(z); }, 1.0, 0.25) ==
          doctest::Approx(std::exp(1.125)).epsilon(1e-12));
}

TEST_CASE("cached rules are stable") {
    const QuadRule& a = gauss_legendre(16);
    const QuadRule& b = gauss_legendre(16);
    CHECK(&a == &b);
    const QuadRule& c = gauss_hermite(48);
    const QuadRule& d = gauss_hermite(48);
    CHECK(&c == &d);
}
