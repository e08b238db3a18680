#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "masslab/analysis.hpp"
#include "masslab/rng.hpp"
#include "support/oracles.hpp"

using namespace masslab;
using oracles::kPi;

TEST_CASE("Lipschitz bound: trivial, closed-form, and random pairs") {
    const ProblemSpec spec = oracles::polyharmonic(1, 1, 24, 3);
    const DensityField rho = uniform_density(spec, 1.0);

    SUBCASE("identical densities give a zero left-hand side") {
        const ExperimentReport report = lipschitz_check(spec, rho, rho, 4);
        REQUIRE(report.applicable);
        CHECK(report.pass());
        for (const auto& row : report.rows) CHECK(row.observed <= 1e-12);
    }

    SUBCASE("uniform relative bump: the two sides are known in closed form") {
        const double eps = 0.01;
        const DensityField bumped = uniform_density(spec, 1.0 + eps);
        const ExperimentReport report = lipschitz_check(spec, rho, bumped, 4);
        REQUIRE(report.applicable);
        CHECK(report.pass());
        // homogeneity: lambda[(1+eps) rho] = lambda / (1+eps), so the distance
        // is lambda eps/(1+eps) while the bound is at least lambda eps
        const SpectralDecomposition dec = eigenvalues(spec, rho, 4);
        for (int n = 1; n <= 4; ++n) {
            const double lambda = dec.lambdas[n - 1];
            const double lhs = lambda * eps / (1.0 + eps);
            CHECK(report.rows[n - 1].observed == doctest::Approx(lhs).epsilon(1e-8));
            // with b = 0 the bound collapses onto the left side exactly
            CHECK(report.rows[n - 1].reference == doctest::Approx(lhs).epsilon(1e-8));
            CHECK(report.rows[n - 1].margin >= -kReportSlack);
        }
    }

    SUBCASE("random admissible pairs all satisfy the bound") {
        const ExperimentReport report = lipschitz_random_pairs(spec, 5, 50, 0x5EED);
        CHECK(report.rows.size() == 50);
        CHECK(report.pass());
    }

    SUBCASE("pairs outside the proximity region are inapplicable, not failures") {
        const DensityField far = uniform_density(spec, 3.0);
        const ExperimentReport report = lipschitz_check(spec, rho, far, 4);
        CHECK_FALSE(report.applicable);
        CHECK(report.pass());
        CHECK(report.rows.empty());
    }
}

TEST_CASE("oscillating densities: eigenvalues settle while the sup-distance stays") {
    const ProblemSpec spec = oracles::polyharmonic(1, 1, 256, 3);
    const DensityField rho = uniform_density(spec, 1.0);

    SUBCASE("theta = 0 leaves the spectrum untouched") {
        const WeakstarExperiment exp = weakstar_experiment(spec, rho, 0.0, {2, 4});
        CHECK(exp.report.pass());
        for (std::size_t j = 0; j < exp.lambdas.size(); ++j)
            for (int n = 0; n < 5; ++n) CHECK(exp.lambdas[j][n] == exp.base_lambdas[n]);
    }

    SUBCASE("deviations decay in j at fixed amplitude") {
        const WeakstarExperiment exp = weakstar_experiment(spec, rho, 0.5, {2, 4, 8, 16});
        CHECK(exp.report.pass());
        for (double sup : exp.sup_distance) CHECK(std::abs(sup - 0.5) <= 1e-12);
        double prev = 1e300;
        for (std::size_t j = 0; j < exp.lambdas.size(); ++j) {
            const double dev = std::abs(exp.lambdas[j][0] - exp.base_lambdas[0]);
            CHECK(dev < prev);
            prev = dev;
        }
    }

    SUBCASE("a constant shift is a control: no weak* convergence, no settling") {
        const double theta = 0.5;
        const DensityField shifted = uniform_density(spec, 1.0 + theta);
        const SpectralDecomposition base = eigenvalues(spec, rho, 1);
        const SpectralDecomposition moved = eigenvalues(spec, shifted, 1);
        CHECK(std::abs(moved.lambdas[0] - base.lambdas[0]) > 0.2 * base.lambdas[0]);
    }

    SUBCASE("unresolved oscillations are rejected") {
        CHECK_THROWS_AS(weakstar_experiment(spec, rho, 0.5, {33}), std::invalid_argument);
        CHECK_THROWS_AS(weakstar_experiment(spec, rho, 1.5, {2}), std::invalid_argument);
    }
}

TEST_CASE("Auchmuty inequality: equality case, zero trial, random trials") {
    const ProblemSpec spec = oracles::polyharmonic(1, 1, 24, 3, 1.0);
    Rng rng(3);
    std::vector<double> values(spec.n_e);
    for (double& v : values) v = rng.uniform(0.6, 1.7);
    const DensityField rho = density_from_values(spec, values);

    const BasisDescriptor basis = build_basis(spec);
    const GramSet gram = assemble(spec, basis, rho);
    const SpectralDecomposition dec = generalized_eig(gram.K, gram.M, 10);

    SUBCASE("u = 0 makes the right side zero, above the negative left side") {
        const Vector zero(basis.dof(), 0.0);
        const AuchmutySides sides = auchmuty_sides(gram, dec, spec.b, zero, 3);
        CHECK(sides.rhs == 0.0);
        CHECK(sides.lhs < 0.0);
    }

    SUBCASE("scaled eigenfunctions attain equality") {
        for (int n = 1; n <= 10; ++n) {
            Vector u = dec.vectors[n - 1];
            for (double& x : u) x /= (spec.b + dec.lambdas[n - 1]);
            const AuchmutySides sides = auchmuty_sides(gram, dec, spec.b, u, n);
            CHECK(std::abs(sides.rhs - sides.lhs) <= 1e-9 * std::max(1.0, std::abs(sides.lhs)));
        }
    }

    SUBCASE("the sweep passes with nonnegative margins") {
        const ExperimentReport report = auchmuty_check(spec, rho, 10, 100, 0x5EED);
        CHECK(report.pass());
        CHECK(report.worst_margin() >= -kReportSlack);
    }
}

TEST_CASE("discrete Garding constant bounds the spectrum from below") {
    const ProblemSpec spec = oracles::polyharmonic(2, 2, 24, 4, 1.0);
    const DensityField rho = uniform_density(spec, 1.4);
    const ExperimentReport report = garding_lower_bound(spec, rho, 10);
    CHECK(report.pass());
    REQUIRE(!report.rows.empty());
    CHECK(report.rows[0].param == "a_h");
    CHECK(report.rows[0].observed > 0.0);

    // scaling the density weakens the bound but must not break it
    std::vector<double> scaled(rho.values);
    for (double& v : scaled) v *= 5.0;
    CHECK(garding_lower_bound(spec, density_from_values(spec, scaled), 10).pass());

    CHECK(garding_lower_bound(spec, rho, 1).pass());
}

TEST_CASE("resolvent eigenvalues invert the shifted spectrum") {
    SUBCASE("hand-checkable diagonal pencil") {
        // K = diag(2,3), M = I, b = 1: mu must be 1/3 and 1/4
        Matrix k(2, 2), shifted(2, 2);
        k(0, 0) = 2.0;
        k(1, 1) = 3.0;
        shifted(0, 0) = 3.0;
        shifted(1, 1) = 4.0;
        const SpectralDecomposition mu = generalized_eig(Matrix::identity(2), shifted, 2);
        CHECK(mu.lambdas[0] == doctest::Approx(0.25).epsilon(1e-14));
        CHECK(mu.lambdas[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
    }

    SUBCASE("clamped beam against the root oracle") {
        const ProblemSpec spec = oracles::polyharmonic(2, 2, 32, 4, 1.0);
        const DensityField rho = uniform_density(spec, 1.0);
        const ExperimentReport report = t_rho_crosscheck(spec, rho, 8);
        CHECK(report.pass());
        const double beta = oracles::clamped_beam_root();
        CHECK(report.rows[0].observed ==
              doctest::Approx(1.0 / (std::pow(beta, 4) + 1.0)).epsilon(1e-3));
        for (const auto& row : report.rows) CHECK(row.observed > 0.0);
    }

    SUBCASE("several shifts") {
        ProblemSpec spec = oracles::polyharmonic(1, 1, 24, 3);
        const DensityField rho = uniform_density(spec, 1.0);
        for (double b : {0.5, 1.0, 10.0}) {
            spec.b = b;
            CHECK(t_rho_crosscheck(spec, rho, 10).pass());
        }
    }
}
