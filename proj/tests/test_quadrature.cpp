#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "masslab/quadrature.hpp"
#include "masslab/rng.hpp"

using namespace masslab;

namespace {

// analytic integral of x^d over [-1, 1]
double monomial_integral(int d) { return (d % 2 == 0) ? 2.0 / (d + 1) : 0.0; }

} // namespace

TEST_CASE("midpoint rule: q = 1") {
    const GaussRule rule = gauss_rule(1);
    REQUIRE(rule.size() == 1);
    CHECK(rule.nodes[0] == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(rule.weights[0] == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("two-point rule hits the degree-2 Legendre roots") {
    const GaussRule rule = gauss_rule(2);
    const double r = 1.0 / std::sqrt(3.0);
    CHECK(rule.nodes[0] == doctest::Approx(-r).epsilon(1e-15));
    CHECK(rule.nodes[1] == doctest::Approx(r).epsilon(1e-15));
    CHECK(rule.weights[0] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(rule.weights[1] == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("five-point rule integrates x^8 exactly") {
    const GaussRule rule = gauss_rule(5);
    double acc = 0.0;
    for (int g = 0; g < rule.size(); ++g) acc += rule.weights[g] * std::pow(rule.nodes[g], 8);
    CHECK(std::abs(acc - 2.0 / 9.0) <= 1e-14);
}

TEST_CASE("weights sum to 2 and rules are exact through degree 2q-1") {
    Rng rng(12345);
    for (int q = 1; q <= 16; ++q) {
        const GaussRule rule = gauss_rule(q);
        double wsum = 0.0;
        for (double w : rule.weights) wsum += w;
        CHECK(std::abs(wsum - 2.0) <= 1e-14);

        // random polynomial of degree 2q-1 against its analytic integral
        std::vector<double> coeff(2 * q);
        for (double& c : coeff) c = rng.symmetric();
        double exact = 0.0;
        for (int d = 0; d < 2 * q; ++d) exact += coeff[d] * monomial_integral(d);
        double quad = 0.0;
        for (int g = 0; g < rule.size(); ++g) {
            double value = 0.0, xp = 1.0;
            for (int d = 0; d < 2 * q; ++d) {
                value += coeff[d] * xp;
                xp *= rule.nodes[g];
            }
            quad += rule.weights[g] * value;
        }
        CHECK(std::abs(quad - exact) <= 1e-13);
    }
}

TEST_CASE("out-of-range point counts are rejected") {
    CHECK_THROWS_AS(gauss_rule(0), std::invalid_argument);
    CHECK_THROWS_AS(gauss_rule(17), std::invalid_argument);
}
