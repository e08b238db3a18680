#pragma once

#include <vector>

#include "masslab/linalg.hpp"

namespace masslab {

/// B-spline basis of degree p on an open uniform knot vector over [0, L] with
/// n_e spans. The discrete space V_h = W^{m,2} cap W^{k,2}_0 is realized by
/// dropping the first and last k coefficients: the j-th endpoint derivative of
/// a spline depends only on the j+1 outermost coefficients, so this enforces
/// u^(j)(0) = u^(j)(L) = 0 for all j < k.
struct BasisDescriptor {
    double length = 0.0;
    int degree = 0;       // p
    int n_elements = 0;   // n_e
    int constrained = 0;  // k coefficients removed at each end
    std::vector<double> knots;

    int n_basis() const { return n_elements + degree; } // full, unconstrained
    int dof() const { return n_basis() - 2 * constrained; }
    double element_width() const { return length / n_elements; }

    /// Global index of the first active (unconstrained) basis function.
    int first_active() const { return constrained; }
};

/// Builds the descriptor, validating p >= m (conformity) and dof >= 1.
BasisDescriptor build_basis(double length, int m, int k, int n_e, int p);

/// Values of the workspace for one evaluation point: derivative orders
/// 0..order of the p+1 basis functions that can be nonzero there.
/// ders[d][j] is the d-th derivative of basis function (first_index + j).
struct LocalBasis {
    int first_index = 0; // global index of the first of the p+1 local functions
    std::vector<std::vector<double>> ders;
};

/// Cox-de Boor evaluation of the nonzero basis functions and derivatives up
/// to `order` at x, 0 <= x <= L. Orders beyond p come out as zeros.
LocalBasis local_basis(const BasisDescriptor& basis, double x, int order);

/// Dense vector of B_r^(order)(x) over the active functions (size dof).
Vector eval_basis(const BasisDescriptor& basis, double x, int order);

/// u^(order)(x) for a coefficient vector over the active functions.
double eval_spline(const BasisDescriptor& basis, const Vector& coeffs, double x, int order);

/// Knot span index containing x, clamped to the nonempty spans.
int find_span(const BasisDescriptor& basis, double x);

} // namespace masslab
