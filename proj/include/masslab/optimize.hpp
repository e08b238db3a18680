#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "masslab/analysis.hpp"
#include "masslab/problem.hpp"
#include "masslab/spectrum.hpp"

namespace masslab {

/// Per-element box A_e <= rho_e <= B_e.
struct BoxConstraint {
    std::vector<double> lower;
    std::vector<double> upper;

    static BoxConstraint uniform(int n_e, double lo, double hi);
    double mass_lower(const DensityField& widths_like) const;
    double mass_upper(const DensityField& widths_like) const;
};

/// Total-mass constraint integral rho dx = M.
struct MassConstraint {
    double M = 0.0;
};

enum class OptimizeSense { minimize, maximize };

enum class StopReason { converged, iteration_cap, cluster_changed, linesearch_failed };

struct OptimizerConfig {
    double tol = 1e-8;        // projected-gradient norm for termination
    int max_iters = 2000;
    double alpha0 = 0.0;      // 0: start from 0.1 * mean(rho0)
    double armijo = 1e-4;
    int max_halvings = 40;
    double cluster_tol = kDefaultClusterTol;
};

struct TracePoint {
    int iter = 0;
    double objective = 0.0;
    double step = 0.0;
    double pg_norm = 0.0;
    double bangbang = 0.0;
};

struct OptimizerTrace {
    std::vector<TracePoint> points;
    DensityField final_rho;
    StopReason reason = StopReason::iteration_cap;
    std::string message;

    double final_objective() const { return points.back().objective; }
    double final_pg_norm() const { return points.back().pg_norm; }
    double final_bangbang() const { return points.back().bangbang; }
};

/// Mass-preserving projection onto {A <= rho <= B, integral rho = M} in the
/// h-weighted least-squares metric: clip(rho_e + s) with the scalar shift s
/// found by bisection so that the total mass matches M to 1e-12 * M.
/// Idempotent; feasible inputs are returned unchanged.
DensityField project(const DensityField& rho, const BoxConstraint& box, const MassConstraint& mass);

/// Gradient of Lambda_{F,h} projected onto the mass-tangent space
/// {sum rho_dot_e h_e = 0}: componentwise g_e minus the h-weighted mean.
std::vector<double> tangent_projected_gradient(const GradientField& grad, const DensityField& rho);

/// First-order stationarity residual on the active-set tangent space: with
/// ghat_e = g_e / h_e and the multiplier c chosen to minimize it,
///   free elements contribute |ghat_e - c|,
///   lower-active ones max(0, c - ghat_e), upper-active ones max(0, ghat_e - c)
/// (signs flipped for maximization), in the h-weighted 2-norm. Zero exactly
/// at a point satisfying the KKT conditions.
double active_set_residual(const GradientField& grad, const DensityField& rho, const BoxConstraint& box,
                           OptimizeSense sense);

/// Projected-gradient ascent/descent of Lambda_{F,h} with Armijo
/// backtracking. F is re-clustered at every iterate; the run aborts if the
/// cluster structure of F changes.
OptimizerTrace run(const ProblemSpec& spec, const DensityField& rho0, const IndexSet& f, int h,
                   OptimizeSense sense, const BoxConstraint& box, const MassConstraint& mass,
                   const OptimizerConfig& config = {});

/// Coefficient of variation (std/mean over the quadrature measure) of
///   w(x) = sum_k c_k sum_{l in F_k} u_l(x)^2.
/// A zero residual is exactly the Lagrange-multiplier condition w = const;
/// for k >= 1 boundary conditions it stays strictly positive. Rejects F with
/// zero or mixed-sign eigenvalues.
double stationarity_residual(const ProblemSpec& spec, const DensityField& rho, const IndexSet& f, int h,
                             double tol_rel = kDefaultClusterTol);

/// Samples strictly interior feasible densities and reports the tangent
/// projected-gradient norm at each; the maximum-principle prediction is that
/// none vanishes.
ExperimentReport interior_scan(const ProblemSpec& spec, const BoxConstraint& box, const MassConstraint& mass,
                               const IndexSet& f, int h, int samples, std::uint64_t seed, double tol = 1e-6);

/// Measure-weighted fraction of elements within eps*(B-A) of a bound.
double bangbang_fraction(const DensityField& rho, const BoxConstraint& box, double eps = 1e-3);

} // namespace masslab
