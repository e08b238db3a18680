#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "masslab/bspline.hpp"
#include "masslab/rng.hpp"

using namespace masslab;

TEST_CASE("dof counts follow n_e + p - 2k") {
    CHECK(build_basis(1.0, 1, 1, 2, 1).dof() == 1);
    CHECK(build_basis(1.0, 2, 2, 8, 3).dof() == 7);

    const BasisDescriptor neumann = build_basis(1.0, 1, 0, 4, 2);
    CHECK(neumann.dof() == 6);
    CHECK(neumann.first_active() == 0); // k = 0 keeps every coefficient
}

TEST_CASE("invalid basis parameters are rejected") {
    CHECK_THROWS_AS(build_basis(1.0, 2, 2, 4, 1), std::invalid_argument); // p < m
    CHECK_THROWS_AS(build_basis(1.0, 2, 2, 2, 2), std::invalid_argument); // dof = 0
    CHECK_THROWS_AS(build_basis(-1.0, 1, 1, 4, 2), std::invalid_argument);
    CHECK_THROWS_AS(build_basis(1.0, 1, 2, 4, 3), std::invalid_argument); // k > m
}

TEST_CASE("full basis is a partition of unity") {
    Rng rng(7);
    for (int p : {1, 2, 3, 4}) {
        const BasisDescriptor basis = build_basis(2.0, 1, 0, 6, p);
        for (int trial = 0; trial < 20; ++trial) {
            const double x = rng.uniform(0.0, 2.0);
            const Vector values = eval_basis(basis, x, 0);
            double sum = 0.0;
            for (double v : values) sum += v;
            CHECK(std::abs(sum - 1.0) <= 1e-13);
        }
    }
}

TEST_CASE("degree-1 interior hat peaks at the midpoint") {
    const BasisDescriptor basis = build_basis(1.0, 1, 1, 2, 1);
    const Vector values = eval_basis(basis, 0.5, 0);
    REQUIRE(values.size() == 1);
    CHECK(values[0] == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("degree-2 first derivative is continuous across knots") {
    const BasisDescriptor basis = build_basis(1.0, 1, 0, 4, 2);
    const double knot = 0.5;
    const Vector left = eval_basis(basis, knot - 1e-9, 1);
    const Vector right = eval_basis(basis, knot + 1e-9, 1);
    for (std::size_t r = 0; r < left.size(); ++r) CHECK(std::abs(left[r] - right[r]) <= 1e-6);
}

TEST_CASE("orders beyond the degree evaluate to zero") {
    const BasisDescriptor basis = build_basis(1.0, 1, 0, 4, 2);
    const Vector values = eval_basis(basis, 0.3, 3);
    for (double v : values) CHECK(v == 0.0);
}

TEST_CASE("constrained basis satisfies the essential conditions at both ends") {
    // k = m: all derivatives through order m-1 vanish at 0 and L
    const BasisDescriptor basis = build_basis(1.0, 2, 2, 8, 4);
    for (int order = 0; order < 2; ++order) {
        for (double x : {0.0, 1.0}) {
            const Vector values = eval_basis(basis, x, order);
            for (double v : values) CHECK(std::abs(v) <= 1e-12);
        }
    }
}

TEST_CASE("analytic derivatives agree with central differences") {
    const BasisDescriptor basis = build_basis(1.0, 1, 0, 5, 3);
    Rng rng(99);
    const double step = 1e-6;
    for (int trial = 0; trial < 25; ++trial) {
        const double x = rng.uniform(2.0 * step, 1.0 - 2.0 * step);
        const Vector d1 = eval_basis(basis, x, 1);
        const Vector fwd = eval_basis(basis, x + step, 0);
        const Vector bwd = eval_basis(basis, x - step, 0);
        for (std::size_t r = 0; r < d1.size(); ++r) {
            const double fd = (fwd[r] - bwd[r]) / (2.0 * step);
            CHECK(std::abs(d1[r] - fd) <= 1e-5 * std::max(1.0, std::abs(d1[r])));
        }
    }
}

TEST_CASE("points outside the interval are rejected") {
    const BasisDescriptor basis = build_basis(1.0, 1, 1, 4, 2);
    CHECK_THROWS_AS(eval_basis(basis, -0.1, 0), std::invalid_argument);
    CHECK_THROWS_AS(eval_basis(basis, 1.1, 0), std::invalid_argument);
    CHECK_NOTHROW(eval_basis(basis, 1.0, 0)); // right endpoint included
}
