#pragma once

#include <vector>

#include "masslab/bspline.hpp"
#include "masslab/linalg.hpp"
#include "masslab/quadrature.hpp"

namespace masslab {

/// Weighted eigenvalue problem on (0, L):
///   sum_{d=0..m} integral A_d(x) u^(d) phi^(d) dx = lambda integral u phi rho dx
/// on V = W^{m,2} cap W^{k,2}_0, with per-element diagonal coefficients A_d and
/// a shift b used wherever the quadratic form needs to be made coercive.
struct ProblemSpec {
    double L = 1.0;
    int m = 1;
    int k = 1;
    int n_e = 2;
    int p = 3;
    double b = 0.0;
    std::vector<std::vector<double>> A; // m+1 arrays, one value per element

    double element_width() const { return L / n_e; }
};

/// Piecewise-constant positive mass density on the element mesh.
struct DensityField {
    std::vector<double> values;
    std::vector<double> widths;

    int size() const { return static_cast<int>(values.size()); }
    double mass() const;
    double min_value() const;
    double max_value() const;
};

/// Stiffness, weighted mass, and Sobolev Gram matrices over the active basis.
/// K realizes the quadratic form Q, M_rho the rho-weighted L2 product, and S
/// the W^{m,2} norm (L2 part plus the m-th derivative part).
struct GramSet {
    Matrix K;
    Matrix M;
    Matrix S;
};

/// Throws std::invalid_argument if the spec violates its invariants
/// (A_m > 0 everywhere; lower-order coefficients may be sign-indefinite, in
/// which case coercivity is only certified by the runtime Garding check).
void validate_problem(const ProblemSpec& spec);

/// Uniform density rho = value on the spec's mesh.
DensityField uniform_density(const ProblemSpec& spec, double value);

/// Density with the given per-element values on the spec's mesh.
DensityField density_from_values(const ProblemSpec& spec, std::vector<double> values);

/// Element midpoints, left to right.
std::vector<double> element_midpoints(const ProblemSpec& spec);

/// Default Garding shift: 0 when all coefficients are nonnegative and k >= 1,
/// otherwise 1.
double default_shift(const ProblemSpec& spec);

BasisDescriptor build_basis(const ProblemSpec& spec);

/// Element-by-element Gauss assembly with q = p + 1 points (exact for the
/// piecewise-polynomial integrands). Symmetric by construction; the mass
/// matrix is Cholesky-probed so a density outside the admissible set is
/// reported with the offending pivot.
GramSet assemble(const ProblemSpec& spec, const BasisDescriptor& basis, const DensityField& rho);

/// Per-element tables of basis derivatives at the mapped Gauss points,
/// shared by assembly, gradients, and pointwise diagnostics.
struct ElementTables {
    GaussRule rule;                       // reference rule on [-1, 1]
    double jacobian = 0.0;                // h / 2
    std::vector<std::vector<double>> points; // [element][q] physical coordinates
    // values[element][order][local][q], local runs over the p+1 span functions
    std::vector<std::vector<std::vector<std::vector<double>>>> values;
    std::vector<int> first_index;         // global index of local function 0
};

ElementTables build_element_tables(const ProblemSpec& spec, const BasisDescriptor& basis, int max_order);

/// integral_e u(x)^2 dx for every element, u given by active coefficients.
std::vector<double> element_square_integrals(const ProblemSpec& spec, const BasisDescriptor& basis,
                                             const Vector& coeffs);

} // namespace masslab
