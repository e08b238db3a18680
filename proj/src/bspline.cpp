#include "masslab/bspline.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace masslab {

BasisDescriptor build_basis(double length, int m, int k, int n_e, int p) {
    if (length <= 0.0) throw std::invalid_argument("build_basis: interval length must be positive");
    if (m < 1) throw std::invalid_argument("build_basis: operator order m must be >= 1");
    if (k < 0 || k > m) throw std::invalid_argument("build_basis: boundary order k must satisfy 0 <= k <= m");
    if (n_e < 2) throw std::invalid_argument("build_basis: need at least 2 elements");
    if (p < m)
        throw std::invalid_argument("build_basis: spline degree p=" + std::to_string(p) +
                                    " below operator order m=" + std::to_string(m));
    if (n_e + p - 2 * k < 1) throw std::invalid_argument("build_basis: constrained space is empty");

    BasisDescriptor basis;
    basis.length = length;
    basis.degree = p;
    basis.n_elements = n_e;
    basis.constrained = k;

    // open uniform knots: p+1 copies of each endpoint, simple interior knots
    const double h = length / n_e;
    basis.knots.assign(n_e + 2 * p + 1, 0.0);
    for (int i = 0; i <= p; ++i) {
        basis.knots[i] = 0.0;
        basis.knots[n_e + p + i] = length;
    }
    for (int i = 1; i < n_e; ++i) basis.knots[p + i] = i * h;
    return basis;
}

int find_span(const BasisDescriptor& basis, double x) {
    const double tol = 1e-12 * std::max(1.0, basis.length);
    if (x < -tol || x > basis.length + tol)
        throw std::invalid_argument("local_basis: x outside [0, L]");
    const double h = basis.element_width();
    int e = static_cast<int>(std::floor(x / h));
    if (e < 0) e = 0;
    if (e > basis.n_elements - 1) e = basis.n_elements - 1;
    // guard against floating x/h landing one span too far left/right
    if (x >= basis.knots[basis.degree + e + 1] && e < basis.n_elements - 1) ++e;
    if (x < basis.knots[basis.degree + e] && e > 0) --e;
    return basis.degree + e;
}

LocalBasis local_basis(const BasisDescriptor& basis, double x, int order) {
    const int p = basis.degree;
    const int span = find_span(basis, x);
    const std::vector<double>& U = basis.knots;

    LocalBasis out;
    out.first_index = span - p;
    out.ders.assign(order + 1, std::vector<double>(p + 1, 0.0));

    const int n = std::min(order, p); // higher derivatives vanish identically

    // Cox-de Boor with derivative accumulation (inverse knot differences kept
    // in the lower triangle of ndu).
    std::vector<std::vector<double>> ndu(p + 1, std::vector<double>(p + 1, 0.0));
    std::vector<double> left(p + 1, 0.0), right(p + 1, 0.0);
    ndu[0][0] = 1.0;
    for (int j = 1; j <= p; ++j) {
        left[j] = x - U[span + 1 - j];
        right[j] = U[span + j] - x;
        double saved = 0.0;
        for (int r = 0; r < j; ++r) {
            ndu[j][r] = right[r + 1] + left[j - r];
            const double temp = ndu[r][j - 1] / ndu[j][r];
            ndu[r][j] = saved + right[r + 1] * temp;
            saved = left[j - r] * temp;
        }
        ndu[j][j] = saved;
    }
    for (int j = 0; j <= p; ++j) out.ders[0][j] = ndu[j][p];

    std::vector<std::vector<double>> a(2, std::vector<double>(p + 1, 0.0));
    for (int r = 0; r <= p; ++r) {
        int s1 = 0, s2 = 1;
        a[0].assign(p + 1, 0.0);
        a[1].assign(p + 1, 0.0);
        a[0][0] = 1.0;
        for (int kd = 1; kd <= n; ++kd) {
            double d = 0.0;
            const int rk = r - kd;
            const int pk = p - kd;
            if (r >= kd) {
                a[s2][0] = a[s1][0] / ndu[pk + 1][rk];
                d = a[s2][0] * ndu[rk][pk];
            }
            const int j1 = (rk >= -1) ? 1 : -rk;
            const int j2 = (r - 1 <= pk) ? kd - 1 : p - r;
            for (int j = j1; j <= j2; ++j) {
                a[s2][j] = (a[s1][j] - a[s1][j - 1]) / ndu[pk + 1][rk + j];
                d += a[s2][j] * ndu[rk + j][pk];
            }
            if (r <= pk) {
                a[s2][kd] = -a[s1][kd - 1] / ndu[pk + 1][r];
                d += a[s2][kd] * ndu[r][pk];
            }
            out.ders[kd][r] = d;
            std::swap(s1, s2);
        }
    }
    double factor = p;
    for (int kd = 1; kd <= n; ++kd) {
        for (int j = 0; j <= p; ++j) out.ders[kd][j] *= factor;
        factor *= (p - kd);
    }
    return out;
}

Vector eval_basis(const BasisDescriptor& basis, double x, int order) {
    Vector values(basis.dof(), 0.0);
    const LocalBasis lb = local_basis(basis, x, order);
    const int k = basis.constrained;
    const int n_full = basis.n_basis();
    for (int j = 0; j <= basis.degree; ++j) {
        const int r = lb.first_index + j;
        if (r < k || r >= n_full - k) continue; // constrained
        values[r - k] = lb.ders[order][j];      // rows beyond degree are zero
    }
    return values;
}

double eval_spline(const BasisDescriptor& basis, const Vector& coeffs, double x, int order) {
    const LocalBasis lb = local_basis(basis, x, order);
    const int k = basis.constrained;
    const int n_full = basis.n_basis();
    double s = 0.0;
    for (int j = 0; j <= basis.degree; ++j) {
        const int r = lb.first_index + j;
        if (r < k || r >= n_full - k) continue;
        s += coeffs[r - k] * lb.ders[order][j];
    }
    return s;
}

} // namespace masslab
