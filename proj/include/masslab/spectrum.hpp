#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "masslab/linalg.hpp"
#include "masslab/problem.hpp"

namespace masslab {

/// Eigenvalue indices are 1-based throughout this module, matching the
/// ordering lambda_1 <= lambda_2 <= ... of the decomposition.
using IndexSet = std::vector<int>;

/// Grouping of the analyzed index range into numerically-equal clusters.
struct ClusterPartition {
    struct Cluster {
        int first = 0; // 1-based, inclusive
        int last = 0;  // 1-based, inclusive
        double value = 0.0; // arithmetic mean of the members

        int size() const { return last - first + 1; }
        bool contains(int j) const { return first <= j && j <= last; }
    };
    std::vector<Cluster> clusters;
    double tol = 0.0;

    int range_end() const { return clusters.empty() ? 0 : clusters.back().last; }
};

/// The decomposition of an admissible F into whole clusters F_1, ..., F_n.
struct ClusterSelection {
    std::vector<ClusterPartition::Cluster> blocks;

    int n() const { return static_cast<int>(blocks.size()); }
    int total_size() const;
};

/// Per-element gradient of a symmetric eigenvalue function: the Frechet
/// differential against a piecewise-constant perturbation is
/// d Lambda_{F,h}[rho][rho_dot] = sum_e g[e] * rho_dot_e.
struct GradientField {
    std::vector<double> g;

    double pair(const std::vector<double>& rho_dot) const;
};

inline constexpr double kDefaultClusterTol = 1e-6;

/// Full pipeline: assemble the spec at rho and return the first `count`
/// eigenpairs, M_rho-orthonormal.
SpectralDecomposition eigenvalues(const ProblemSpec& spec, const DensityField& rho, int count);

/// Greedy left-to-right grouping: index j+1 joins the cluster of j iff
/// |lambda_{j+1} - lambda_j| <= tol_rel * max(1, |lambda_j|).
ClusterPartition detect_clusters(const Vector& lambdas, double tol_rel);

/// Checks that F is a union of whole clusters (so lambda_j != lambda_l for
/// j in F, l outside F, numerically) and returns the block decomposition.
/// Throws std::invalid_argument naming the split cluster otherwise.
ClusterSelection validate_F(const IndexSet& f, const ClusterPartition& partition);

/// Exact binomial C(n, k) in integer arithmetic; C(a, -1) = 0. n is limited
/// to 20, which covers every cluster size this laboratory accepts.
std::int64_t binomial(int n, int k);

/// Elementary symmetric function of the given values, degree h, by the stable
/// ascending recurrence; h = 0 returns 1.
double elementary_symmetric(const std::vector<double>& values, int h);

/// Both sides of the shift identity: Lambda_{F,h} evaluated directly and via
/// the shifted functions, sum_k (-b)^{h-k} C(|F|-k, h-k) Lambda~_{F,k}.
std::pair<double, double> shift_identity_check(const std::vector<double>& values, double b, int h);

/// Block factorization: Lambda_{F,h} of the pooled values versus the
/// convolution of per-block elementary symmetric functions; returns both.
std::pair<double, double> block_identity_check(const std::vector<std::vector<double>>& blocks, int h);

/// The coefficients c_1..c_n of the differential formula for the cluster
/// values lambda_{F_k} and sizes |F_k|:
///   c_k = sum over compositions h_1+...+h_n = h, 0 <= h_j <= |F_j|, of
///         C(|F_k|-1, h_k-1) lambda_{F_k}^{h_k} prod_{j != k} C(|F_j|, h_j) lambda_{F_j}^{h_j}.
std::vector<double> ck_coefficients(const std::vector<double>& values, const std::vector<int>& sizes, int h);

/// Lambda_{F,h} from a computed decomposition, using the raw eigenvalues at
/// the (1-based) indices of F.
double symmetric_value(const SpectralDecomposition& dec, const IndexSet& f, int h);

/// Gradient of Lambda_{F,h} at rho:
///   g_e = - sum_k c_k sum_{l in F_k} integral_e u_l^2 dx.
/// F must be a union of clusters of the spectrum at rho (tolerance tol_rel).
GradientField differential(const ProblemSpec& spec, const DensityField& rho, const IndexSet& f, int h,
                           double tol_rel = kDefaultClusterTol);

/// differential() with the decomposition, basis, and selection already in
/// hand (the optimizer reuses them across an iterate).
GradientField differential_from(const ProblemSpec& spec, const BasisDescriptor& basis,
                                const SpectralDecomposition& dec, const ClusterSelection& sel, int h);

} // namespace masslab
