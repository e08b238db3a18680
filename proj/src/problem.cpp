#include "masslab/problem.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace masslab {

double DensityField::mass() const {
    double s = 0.0;
    for (std::size_t e = 0; e < values.size(); ++e) s += values[e] * widths[e];
    return s;
}

double DensityField::min_value() const {
    return *std::min_element(values.begin(), values.end());
}

double DensityField::max_value() const {
    return *std::max_element(values.begin(), values.end());
}

void validate_problem(const ProblemSpec& spec) {
    if (spec.L <= 0.0) throw std::invalid_argument("problem: L must be positive");
    if (spec.m < 1) throw std::invalid_argument("problem: m must be >= 1");
    if (spec.k < 0 || spec.k > spec.m) throw std::invalid_argument("problem: k must satisfy 0 <= k <= m");
    if (spec.n_e < 2) throw std::invalid_argument("problem: n_e must be >= 2");
    if (spec.p < spec.m) throw std::invalid_argument("problem: p must be >= m for conformity");
    if (spec.n_e + spec.p - 2 * spec.k < 1) throw std::invalid_argument("problem: constrained space is empty");
    if (spec.b < 0.0) throw std::invalid_argument("problem: shift b must be >= 0");
    if (static_cast<int>(spec.A.size()) != spec.m + 1)
        throw std::invalid_argument("problem: expected " + std::to_string(spec.m + 1) + " coefficient arrays");
    for (int d = 0; d <= spec.m; ++d)
        if (static_cast<int>(spec.A[d].size()) != spec.n_e)
            throw std::invalid_argument("problem: coefficient array A_" + std::to_string(d) +
                                        " must have one value per element");
    for (int e = 0; e < spec.n_e; ++e)
        if (!(spec.A[spec.m][e] > 0.0))
            throw std::invalid_argument("problem: leading coefficient A_m must be positive (element " +
                                        std::to_string(e) + ")");
}

DensityField uniform_density(const ProblemSpec& spec, double value) {
    DensityField rho;
    rho.values.assign(spec.n_e, value);
    rho.widths.assign(spec.n_e, spec.element_width());
    return rho;
}

DensityField density_from_values(const ProblemSpec& spec, std::vector<double> values) {
    if (static_cast<int>(values.size()) != spec.n_e)
        throw std::invalid_argument("density: expected one value per element");
    DensityField rho;
    rho.values = std::move(values);
    rho.widths.assign(spec.n_e, spec.element_width());
    return rho;
}

std::vector<double> element_midpoints(const ProblemSpec& spec) {
    std::vector<double> mid(spec.n_e);
    const double h = spec.element_width();
    for (int e = 0; e < spec.n_e; ++e) mid[e] = (e + 0.5) * h;
    return mid;
}

double default_shift(const ProblemSpec& spec) {
    if (spec.k < 1) return 1.0;
    for (int d = 0; d < spec.m; ++d)
        for (double a : spec.A[d])
            if (a < 0.0) return 1.0;
    return 0.0;
}

BasisDescriptor build_basis(const ProblemSpec& spec) {
    validate_problem(spec);
    return build_basis(spec.L, spec.m, spec.k, spec.n_e, spec.p);
}

ElementTables build_element_tables(const ProblemSpec& spec, const BasisDescriptor& basis, int max_order) {
    ElementTables tab;
    tab.rule = gauss_rule(spec.p + 1);
    const double h = spec.element_width();
    tab.jacobian = 0.5 * h;
    const int q = tab.rule.size();
    const int p = spec.p;

    tab.points.assign(spec.n_e, std::vector<double>(q, 0.0));
    tab.values.assign(spec.n_e, {});
    tab.first_index.assign(spec.n_e, 0);
    for (int e = 0; e < spec.n_e; ++e) {
        const double x0 = e * h;
        tab.values[e].assign(max_order + 1, std::vector<std::vector<double>>(p + 1, std::vector<double>(q, 0.0)));
        for (int g = 0; g < q; ++g) {
            const double x = x0 + tab.jacobian * (tab.rule.nodes[g] + 1.0);
            tab.points[e][g] = x;
            LocalBasis lb = local_basis(basis, x, max_order);
            if (g == 0) tab.first_index[e] = lb.first_index;
            for (int d = 0; d <= max_order; ++d)
                for (int j = 0; j <= p; ++j) tab.values[e][d][j][g] = lb.ders[d][j];
        }
    }
    return tab;
}

GramSet assemble(const ProblemSpec& spec, const BasisDescriptor& basis, const DensityField& rho) {
    validate_problem(spec);
    if (rho.size() != spec.n_e) throw std::invalid_argument("assemble: density and spec disagree on n_e");

    const int dof = basis.dof();
    const int p = spec.p;
    const int kcon = spec.k;
    const int n_full = basis.n_basis();

    GramSet gram{Matrix(dof, dof), Matrix(dof, dof), Matrix(dof, dof)};
    const ElementTables tab = build_element_tables(spec, basis, spec.m);
    const int q = tab.rule.size();

    for (int e = 0; e < spec.n_e; ++e) {
        const int first = tab.first_index[e];
        for (int i = 0; i <= p; ++i) {
            const int gi = first + i;
            if (gi < kcon || gi >= n_full - kcon) continue;
            const int ri = gi - kcon;
            for (int j = i; j <= p; ++j) {
                const int gj = first + j;
                if (gj < kcon || gj >= n_full - kcon) continue;
                const int rj = gj - kcon;
                double kij = 0.0, mij = 0.0, sij = 0.0;
                for (int g = 0; g < q; ++g) {
                    const double w = tab.rule.weights[g] * tab.jacobian;
                    double form = 0.0;
                    for (int d = 0; d <= spec.m; ++d)
                        form += spec.A[d][e] * tab.values[e][d][i][g] * tab.values[e][d][j][g];
                    kij += w * form;
                    const double v0 = tab.values[e][0][i][g] * tab.values[e][0][j][g];
                    mij += w * rho.values[e] * v0;
                    sij += w * (v0 + tab.values[e][spec.m][i][g] * tab.values[e][spec.m][j][g]);
                }
                gram.K(ri, rj) += kij;
                gram.M(ri, rj) += mij;
                gram.S(ri, rj) += sij;
                if (ri != rj) {
                    gram.K(rj, ri) = gram.K(ri, rj);
                    gram.M(rj, ri) = gram.M(ri, rj);
                    gram.S(rj, ri) = gram.S(ri, rj);
                }
            }
        }
    }

    // probe: a density outside the admissible set surfaces here
    try {
        cholesky(gram.M);
    } catch (const std::runtime_error& err) {
        throw std::runtime_error(std::string("assemble: weighted mass matrix is not positive definite (") +
                                 err.what() + "); density violates ess inf rho > 0");
    }
    return gram;
}

std::vector<double> element_square_integrals(const ProblemSpec& spec, const BasisDescriptor& basis,
                                             const Vector& coeffs) {
    const ElementTables tab = build_element_tables(spec, basis, 0);
    std::vector<double> out(spec.n_e, 0.0);
    const int p = spec.p;
    const int kcon = spec.k;
    const int n_full = basis.n_basis();
    const int q = tab.rule.size();
    for (int e = 0; e < spec.n_e; ++e) {
        const int first = tab.first_index[e];
        double acc = 0.0;
        for (int g = 0; g < q; ++g) {
            double u = 0.0;
            for (int j = 0; j <= p; ++j) {
                const int gj = first + j;
                if (gj < kcon || gj >= n_full - kcon) continue;
                u += coeffs[gj - kcon] * tab.values[e][0][j][g];
            }
            acc += tab.rule.weights[g] * tab.jacobian * u * u;
        }
        out[e] = acc;
    }
    return out;
}

} // namespace masslab
