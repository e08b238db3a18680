#include "masslab/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "masslab/rng.hpp"

namespace masslab {

namespace {

const double kPi = 3.14159265358979323846;

ExperimentRow make_row(std::string param, double observed, double reference, double margin) {
    ExperimentRow row;
    row.param = std::move(param);
    row.observed = observed;
    row.reference = reference;
    row.margin = margin;
    row.pass = margin >= -kReportSlack;
    return row;
}

} // namespace

bool ExperimentReport::pass() const {
    if (!applicable) return true;
    return std::all_of(rows.begin(), rows.end(), [](const ExperimentRow& r) { return r.pass; });
}

double ExperimentReport::worst_margin() const {
    double w = std::numeric_limits<double>::infinity();
    for (const auto& r : rows) w = std::min(w, r.margin);
    return rows.empty() ? 0.0 : w;
}

ExperimentReport lipschitz_check(const ProblemSpec& spec, const DensityField& rho1, const DensityField& rho2,
                                 int count) {
    ExperimentReport report;
    report.name = "lipschitz";

    double dist = 0.0;
    for (int e = 0; e < rho1.size(); ++e) dist = std::max(dist, std::abs(rho1.values[e] - rho2.values[e]));
    const double inf_min = std::min(rho1.min_value(), rho2.min_value());
    if (!(dist < inf_min)) {
        report.applicable = false; // proximity condition fails: bound is not claimed here
        return report;
    }

    const SpectralDecomposition d1 = eigenvalues(spec, rho1, count);
    const SpectralDecomposition d2 = eigenvalues(spec, rho2, count);
    for (int n = 1; n <= count; ++n) {
        const double l1 = d1.lambdas[n - 1];
        const double l2 = d2.lambdas[n - 1];
        const double lhs = std::abs(l1 - l2);
        const double bound = (std::min(l1, l2) + 2.0 * spec.b) / inf_min * dist;
        report.rows.push_back(make_row("n=" + std::to_string(n), lhs, bound, bound - lhs));
    }
    return report;
}

ExperimentReport lipschitz_random_pairs(const ProblemSpec& spec, int count, int pairs, std::uint64_t seed) {
    ExperimentReport report;
    report.name = "lipschitz_random";
    Rng rng(seed);
    for (int i = 0; i < pairs; ++i) {
        std::vector<double> v1(spec.n_e), v2(spec.n_e);
        for (int e = 0; e < spec.n_e; ++e) {
            v1[e] = rng.uniform(0.8, 1.6);
            v2[e] = v1[e] + rng.uniform(-0.3, 0.3); // inf >= 0.5 while ||diff|| <= 0.3
        }
        const ExperimentReport one =
            lipschitz_check(spec, density_from_values(spec, v1), density_from_values(spec, v2), count);
        if (!one.applicable) throw std::logic_error("lipschitz_random_pairs: constructed pair not admissible");
        report.rows.push_back(make_row("pair=" + std::to_string(i), one.worst_margin(), 0.0, one.worst_margin()));
    }
    return report;
}

double sinusoid_sup_distance(const ProblemSpec& spec, const DensityField& rho_bar, double theta, int j) {
    // peaks of |sin(2 pi j x / L)| sit at x = u L / (4j) for odd integers u;
    // element e contains one iff some odd u satisfies 4je <= u n_e <= 4j(e+1),
    // which is exact in integer arithmetic.
    double sup = 0.0;
    const std::int64_t n_e = spec.n_e;
    const std::int64_t four_j = 4ll * j;
    for (int e = 0; e < spec.n_e; ++e) {
        const std::int64_t lo_num = four_j * e;        // u >= lo_num / n_e
        const std::int64_t hi_num = four_j * (e + 1);  // u <= hi_num / n_e
        std::int64_t u_min = (lo_num + n_e - 1) / n_e;
        std::int64_t u_max = hi_num / n_e;
        bool peak = false;
        if (u_min <= u_max) peak = (u_min % 2 != 0) || (u_min + 1 <= u_max);
        double m;
        if (peak) {
            m = 1.0;
        } else {
            const double xl = e * spec.element_width();
            const double xr = (e + 1) * spec.element_width();
            m = std::max(std::abs(std::sin(2.0 * kPi * j * xl / spec.L)),
                         std::abs(std::sin(2.0 * kPi * j * xr / spec.L)));
        }
        sup = std::max(sup, rho_bar.values[e] * theta * m);
    }
    return sup;
}

WeakstarExperiment weakstar_experiment(const ProblemSpec& spec, const DensityField& rho_bar, double theta,
                                       const std::vector<int>& j_list) {
    if (theta < 0.0 || theta >= 1.0)
        throw std::invalid_argument("weakstar_experiment: amplitude theta must be in [0, 1)");
    if (j_list.empty()) throw std::invalid_argument("weakstar_experiment: empty j list");
    for (int j : j_list)
        if (j < 1 || 8 * j > spec.n_e)
            throw std::invalid_argument("weakstar_experiment: oscillation j=" + std::to_string(j) +
                                        " not resolved by the mesh (need j <= n_e/8)");

    const int n_track = 5;
    WeakstarExperiment out;
    out.report.name = "weakstar";
    out.j_list = j_list;

    const SpectralDecomposition base = eigenvalues(spec, rho_bar, n_track);
    out.base_lambdas = base.lambdas;

    const std::vector<double> mid = element_midpoints(spec);
    for (int j : j_list) {
        std::vector<double> values(spec.n_e);
        for (int e = 0; e < spec.n_e; ++e)
            values[e] = rho_bar.values[e] * (1.0 + theta * std::sin(2.0 * kPi * j * mid[e] / spec.L));
        const SpectralDecomposition dec = eigenvalues(spec, density_from_values(spec, values), n_track);
        out.lambdas.push_back(dec.lambdas);
        out.sup_distance.push_back(sinusoid_sup_distance(spec, rho_bar, theta, j));

        const double ref_sup = theta * rho_bar.max_value();
        out.report.rows.push_back(make_row("supdist j=" + std::to_string(j), out.sup_distance.back(), ref_sup,
                                           1e-12 - std::abs(out.sup_distance.back() - ref_sup)));
        for (int n = 1; n <= n_track; ++n) {
            const double dev = std::abs(dec.lambdas[n - 1] - base.lambdas[n - 1]);
            ExperimentRow row = make_row("dev j=" + std::to_string(j) + " n=" + std::to_string(n), dev, 0.0, 0.0);
            row.pass = true; // informational
            out.report.rows.push_back(row);
        }
    }

    for (int n = 1; n <= n_track; ++n) {
        const double first = std::abs(out.lambdas.front()[n - 1] - base.lambdas[n - 1]);
        const double last = std::abs(out.lambdas.back()[n - 1] - base.lambdas[n - 1]);
        const double scale = std::max(1.0, std::abs(base.lambdas[n - 1]));
        double ratio;
        if (first <= 1e-13 * scale)
            ratio = 0.0; // theta = 0 or unperturbed mode: nothing to decay
        else
            ratio = last / first;
        out.report.rows.push_back(make_row("decay n=" + std::to_string(n), ratio, 0.1, 0.1 - ratio));
    }
    return out;
}

AuchmutySides auchmuty_sides(const GramSet& gram, const SpectralDecomposition& dec, double b, const Vector& u,
                             int n) {
    if (n < 1 || n > dec.count()) throw std::invalid_argument("auchmuty_sides: n outside decomposition");
    const double lambda_n = dec.lambdas[n - 1];
    if (!(b + dec.lambdas[0] > 0.0)) throw std::invalid_argument("auchmuty_sides: need b + lambda_1 > 0");

    const Vector mu = gram.M.multiply(u);
    const Vector ku = gram.K.multiply(u);
    const double q = dot(ku, u);
    const double unorm2 = dot(mu, u);

    // residual u - P_{n-1} u against the M-orthonormal eigenvectors
    Vector res = u;
    for (int i = 0; i < n - 1; ++i) {
        const double coef = dot(mu, dec.vectors[i]);
        res = axpy(-coef, dec.vectors[i], res);
    }
    const Vector mres = gram.M.multiply(res);
    const double res_norm = std::sqrt(std::max(0.0, dot(mres, res)));

    AuchmutySides sides;
    sides.lhs = -1.0 / (2.0 * (b + lambda_n));
    sides.rhs = 0.5 * (q + b * unorm2) - res_norm;
    return sides;
}

ExperimentReport auchmuty_check(const ProblemSpec& spec, const DensityField& rho, int n_max, int trials,
                                std::uint64_t seed) {
    ExperimentReport report;
    report.name = "auchmuty";
    const BasisDescriptor basis = build_basis(spec);
    const GramSet gram = assemble(spec, basis, rho);
    const SpectralDecomposition dec = generalized_eig(gram.K, gram.M, std::min(n_max, basis.dof()));

    Rng rng(seed);
    for (int n = 1; n <= dec.count(); ++n) {
        // equality case: u = u_n / (b + lambda_n) makes both sides coincide
        Vector u = dec.vectors[n - 1];
        const double scale = 1.0 / (spec.b + dec.lambdas[n - 1]);
        for (double& x : u) x *= scale;
        const AuchmutySides eq = auchmuty_sides(gram, dec, spec.b, u, n);
        const double eq_err = std::abs(eq.rhs - eq.lhs) / std::max(1.0, std::abs(eq.lhs));
        report.rows.push_back(make_row("equality n=" + std::to_string(n), eq_err, 1e-9, 1e-9 - eq_err));

        double worst = std::numeric_limits<double>::infinity();
        for (int t = 0; t < trials; ++t) {
            Vector trial(basis.dof());
            for (double& x : trial) x = rng.symmetric();
            const AuchmutySides s = auchmuty_sides(gram, dec, spec.b, trial, n);
            worst = std::min(worst, s.rhs - s.lhs);
        }
        report.rows.push_back(make_row("random n=" + std::to_string(n), worst, 0.0, worst));
    }
    return report;
}

ExperimentReport garding_lower_bound(const ProblemSpec& spec, const DensityField& rho, int count) {
    ExperimentReport report;
    report.name = "garding";
    const BasisDescriptor basis = build_basis(spec);
    const GramSet gram = assemble(spec, basis, rho);

    Matrix shifted = gram.K;
    for (int i = 0; i < shifted.rows(); ++i)
        for (int j = 0; j < shifted.cols(); ++j) shifted(i, j) += spec.b * gram.M(i, j);

    const SpectralDecomposition garding = generalized_eig(shifted, gram.S, 1);
    const double a_h = garding.lambdas[0];
    report.rows.push_back(make_row("a_h", a_h, 0.0, a_h));

    const SpectralDecomposition dec = generalized_eig(gram.K, gram.M, std::min(count, basis.dof()));
    const double bound = -spec.b + a_h / rho.max_value();
    for (int n = 1; n <= dec.count(); ++n)
        report.rows.push_back(
            make_row("n=" + std::to_string(n), dec.lambdas[n - 1], bound, dec.lambdas[n - 1] - bound));
    return report;
}

ExperimentReport t_rho_crosscheck(const ProblemSpec& spec, const DensityField& rho, int count) {
    ExperimentReport report;
    report.name = "t_rho";
    const BasisDescriptor basis = build_basis(spec);
    const GramSet gram = assemble(spec, basis, rho);
    const int dof = basis.dof();
    const int n_check = std::min(count, dof);

    const SpectralDecomposition dec = generalized_eig(gram.K, gram.M, n_check);
    if (!(spec.b + dec.lambdas[0] > 0.0))
        throw std::invalid_argument("t_rho_crosscheck: need b + lambda_1 > 0");

    // independent route: mu are the eigenvalues of M v = mu (K + bM) v,
    // reduced with the Cholesky factor of the shifted form
    Matrix shifted = gram.K;
    for (int i = 0; i < dof; ++i)
        for (int j = 0; j < dof; ++j) shifted(i, j) += spec.b * gram.M(i, j);
    SpectralDecomposition mu_all;
    try {
        mu_all = generalized_eig(gram.M, shifted, dof);
    } catch (const std::runtime_error& err) {
        throw std::runtime_error(std::string("t_rho_crosscheck: K + b*M_rho is singular (") + err.what() + ")");
    }
    // mu ascending from the pencil (M, K+bM); T_rho's spectrum is these in
    // descending order, pairing with ascending lambda
    for (int n = 1; n <= n_check; ++n) {
        const double mu = mu_all.lambdas[dof - n];
        const double ref = 1.0 / (dec.lambdas[n - 1] + spec.b);
        const double rel = std::abs(mu - ref) / std::abs(ref);
        report.rows.push_back(make_row("n=" + std::to_string(n), mu, ref, 1e-8 - rel));
    }
    double mu_min = std::numeric_limits<double>::infinity();
    for (double m : mu_all.lambdas) mu_min = std::min(mu_min, m);
    report.rows.push_back(make_row("positivity", mu_min, 0.0, mu_min));
    return report;
}

ExperimentReport gradient_fd_check(const ProblemSpec& spec, const DensityField& rho, const IndexSet& f, int h,
                                   int directions, std::uint64_t seed, double tol, double step_scale) {
    ExperimentReport report;
    report.name = "gradcheck";

    const BasisDescriptor basis = build_basis(spec);
    const int max_f = *std::max_element(f.begin(), f.end());
    const int count = std::min(basis.dof(), max_f + 1);
    const SpectralDecomposition dec = eigenvalues(spec, rho, count);
    const ClusterPartition part = detect_clusters(dec.lambdas, kDefaultClusterTol);
    const ClusterSelection sel = validate_F(f, part);
    const GradientField grad = differential_from(spec, basis, dec, sel, h);

    const double step = step_scale * (1.0 + rho.max_value());
    Rng rng(seed);
    for (int d = 0; d < directions; ++d) {
        std::vector<double> dir(spec.n_e);
        for (double& x : dir) x = rng.symmetric();
        const double analytic = grad.pair(dir);

        std::vector<double> plus(rho.values), minus(rho.values);
        for (int e = 0; e < spec.n_e; ++e) {
            plus[e] += step * dir[e];
            minus[e] -= step * dir[e];
        }
        const double f_plus = symmetric_value(eigenvalues(spec, density_from_values(spec, plus), count), f, h);
        const double f_minus = symmetric_value(eigenvalues(spec, density_from_values(spec, minus), count), f, h);
        const double fd = (f_plus - f_minus) / (2.0 * step);

        const double rel = std::abs(analytic - fd) / std::max({std::abs(analytic), std::abs(fd), 1e-12});
        report.rows.push_back(make_row("dir=" + std::to_string(d), rel, tol, tol - rel));
    }
    return report;
}

} // namespace masslab
