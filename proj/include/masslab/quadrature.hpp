#pragma once

#include <vector>

namespace masslab {

/// Gauss-Legendre rule on [-1, 1], exact for polynomials of degree <= 2q - 1.
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;

    int size() const { return static_cast<int>(nodes.size()); }
};

/// Nodes and weights for q points, 1 <= q <= 16. Computed by Newton iteration
/// on the Legendre recurrence; out-of-range q is rejected.
GaussRule gauss_rule(int q);

} // namespace masslab
