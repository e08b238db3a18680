#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "masslab/problem.hpp"
#include "masslab/spectrum.hpp"

namespace masslab {

/// One verified inequality or agreement: `pass` means `observed` satisfies it
/// against `reference` within 1e-9 slack, and `margin` is the signed slack
/// actually achieved (negative = violated).
struct ExperimentRow {
    std::string param;
    double observed = 0.0;
    double reference = 0.0;
    double margin = 0.0;
    bool pass = false;
};

struct ExperimentReport {
    std::string name;
    std::vector<ExperimentRow> rows;
    bool applicable = true; // false: preconditions failed, result is "inapplicable", not a failure

    bool pass() const;
    double worst_margin() const;
};

inline constexpr double kReportSlack = 1e-9;

/// Checks the locally-Lipschitz bound
///   |lambda_n[rho1] - lambda_n[rho2]|
///     <= (min(lambda_n[rho1], lambda_n[rho2]) + 2b) / min(inf rho1, inf rho2) * ||rho1 - rho2||_inf
/// for n <= count, valid when ||rho1 - rho2||_inf < min(inf rho1, inf rho2).
/// A pair outside that proximity region yields an inapplicable report.
ExperimentReport lipschitz_check(const ProblemSpec& spec, const DensityField& rho1, const DensityField& rho2,
                                 int count);

/// Draws `pairs` admissible density pairs within the proximity region and
/// runs lipschitz_check on each; one row per pair carrying its worst margin.
ExperimentReport lipschitz_random_pairs(const ProblemSpec& spec, int count, int pairs, std::uint64_t seed);

/// The oscillating-density continuity experiment. rho_j has element values
/// rho_bar_e (1 + theta sin(2 pi j x_e / L)) at the element midpoints x_e; the
/// family converges weakly* to rho_bar while its sup-distance stays at
/// theta * max(rho_bar). The report asserts, for each n <= 5, that the
/// deviation |lambda_n[rho_j] - lambda_n[rho_bar]| at the largest j has
/// dropped below 10% of its value at the smallest j.
struct WeakstarExperiment {
    ExperimentReport report;
    std::vector<int> j_list;
    Vector base_lambdas;                  // lambda_n[rho_bar], n <= 5
    std::vector<Vector> lambdas;          // [j][n]
    std::vector<double> sup_distance;     // per j, exact continuum sup-norm
};

WeakstarExperiment weakstar_experiment(const ProblemSpec& spec, const DensityField& rho_bar, double theta,
                                       const std::vector<int>& j_list);

/// Exact sup-norm of x -> rho_e * theta * sin(2 pi j x / L) over the mesh:
/// per element, the extremum is either an interior sine peak (located with
/// integer arithmetic) or an endpoint value.
double sinusoid_sup_distance(const ProblemSpec& spec, const DensityField& rho_bar, double theta, int j);

/// Both sides of the Auchmuty inequality for one trial vector u (active
/// coefficients) at index n:
///   -1/(2(b + lambda_n)) <= (Q[u,u] + b ||u||_rho^2)/2 - ||u - P_{n-1} u||_rho.
struct AuchmutySides {
    double lhs = 0.0;
    double rhs = 0.0;
};

AuchmutySides auchmuty_sides(const GramSet& gram, const SpectralDecomposition& dec, double b, const Vector& u,
                             int n);

/// Sweeps n <= n_max with `trials` random trial vectors each, plus the
/// equality case u = u_n / (b + lambda_n) which must reproduce the left side.
ExperimentReport auchmuty_check(const ProblemSpec& spec, const DensityField& rho, int n_max, int trials,
                                std::uint64_t seed);

/// Computes the discrete Garding constant a_h (smallest eigenvalue of the
/// pencil (K + b M_rho, S)) and asserts lambda_n > -b + a_h / max(rho) for
/// n <= count.
ExperimentReport garding_lower_bound(const ProblemSpec& spec, const DensityField& rho, int count);

/// Eigenvalues mu of the resolvent-type operator (K + b M_rho)^{-1} M_rho via
/// the symmetric reduction with the Cholesky factor of K + b M_rho; asserts
/// mu_n = 1/(lambda_n + b) to 1e-8 relative with descending mu matching
/// ascending lambda, all positive.
ExperimentReport t_rho_crosscheck(const ProblemSpec& spec, const DensityField& rho, int count);

/// Analytic gradient of Lambda_{F,h} against central finite differences along
/// `directions` random perturbations. One row per direction with the relative
/// error versus `tol`. The default step 1e-5 * (1 + max rho) suits
/// second-order problems; stiff pencils (large ||K||) need a larger step to
/// stay above the eigensolver's absolute noise floor, passed via
/// `step_scale` (the step is step_scale * (1 + max rho)).
ExperimentReport gradient_fd_check(const ProblemSpec& spec, const DensityField& rho, const IndexSet& f, int h,
                                   int directions, std::uint64_t seed, double tol = 1e-4,
                                   double step_scale = 1e-5);

} // namespace masslab
