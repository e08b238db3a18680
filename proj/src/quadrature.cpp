#include "masslab/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace masslab {

GaussRule gauss_rule(int q) {
    if (q < 1 || q > 16) throw std::invalid_argument("gauss_rule: q must be in [1, 16]");

    GaussRule rule;
    rule.nodes.assign(q, 0.0);
    rule.weights.assign(q, 0.0);

    // Roots come in +- pairs; solve for the non-negative half by Newton from
    // the Chebyshev-like initial guess, evaluating P_q and P_q' with the
    // three-term recurrence.
    const int half = (q + 1) / 2;
    const double pi = 3.14159265358979323846;
    for (int i = 0; i < half; ++i) {
        double x = std::cos(pi * (i + 0.75) / (q + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= q; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = q * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        // one clean-up pass of the recurrence at the converged node
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= q; ++k) {
            const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        dp = q * (x * p1 - p0) / (x * x - 1.0);

        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[i] = -x;
        rule.nodes[q - 1 - i] = x;
        rule.weights[i] = w;
        rule.weights[q - 1 - i] = w;
    }
    if (q % 2 == 1) rule.nodes[q / 2] = 0.0;
    return rule;
}

} // namespace masslab
