#include "masslab/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "masslab/rng.hpp"

namespace masslab {

BoxConstraint BoxConstraint::uniform(int n_e, double lo, double hi) {
    BoxConstraint box;
    box.lower.assign(n_e, lo);
    box.upper.assign(n_e, hi);
    return box;
}

double BoxConstraint::mass_lower(const DensityField& like) const {
    double s = 0.0;
    for (std::size_t e = 0; e < lower.size(); ++e) s += lower[e] * like.widths[e];
    return s;
}

double BoxConstraint::mass_upper(const DensityField& like) const {
    double s = 0.0;
    for (std::size_t e = 0; e < upper.size(); ++e) s += upper[e] * like.widths[e];
    return s;
}

namespace {

void validate_constraints(const DensityField& rho, const BoxConstraint& box, const MassConstraint& mass) {
    const std::size_t n = rho.values.size();
    if (box.lower.size() != n || box.upper.size() != n)
        throw std::invalid_argument("project: box and density disagree on n_e");
    for (std::size_t e = 0; e < n; ++e) {
        if (!(box.lower[e] > 0.0)) throw std::invalid_argument("project: lower bound must be positive");
        if (!(box.lower[e] < box.upper[e]))
            throw std::invalid_argument("project: need A_e < B_e at element " + std::to_string(e));
    }
    const double lo = box.mass_lower(rho);
    const double hi = box.mass_upper(rho);
    if (!(lo <= mass.M && mass.M <= hi))
        throw std::invalid_argument("project: mass target M outside [sum A h, sum B h]");
}

double clipped_mass(const DensityField& rho, const BoxConstraint& box, double s, std::vector<double>* out) {
    double total = 0.0;
    for (int e = 0; e < rho.size(); ++e) {
        const double v = std::clamp(rho.values[e] + s, box.lower[e], box.upper[e]);
        if (out) (*out)[e] = v;
        total += v * rho.widths[e];
    }
    return total;
}

} // namespace

DensityField project(const DensityField& rho, const BoxConstraint& box, const MassConstraint& mass) {
    validate_constraints(rho, box, mass);
    const double mass_tol = 1e-12 * std::max(mass.M, 1e-300);

    DensityField out;
    out.widths = rho.widths;

    // boundary-tight targets are forced by the bounds
    if (mass.M >= box.mass_upper(rho) - mass_tol) {
        out.values = box.upper;
        return out;
    }
    if (mass.M <= box.mass_lower(rho) + mass_tol) {
        out.values = box.lower;
        return out;
    }

    // already feasible: return unchanged so the projection is exactly idempotent
    bool inside = true;
    for (int e = 0; e < rho.size(); ++e)
        if (rho.values[e] < box.lower[e] || rho.values[e] > box.upper[e]) {
            inside = false;
            break;
        }
    if (inside && std::abs(rho.mass() - mass.M) <= mass_tol) return rho;

    double s_lo = std::numeric_limits<double>::infinity();
    double s_hi = -std::numeric_limits<double>::infinity();
    for (int e = 0; e < rho.size(); ++e) {
        s_lo = std::min(s_lo, box.lower[e] - rho.values[e]);
        s_hi = std::max(s_hi, box.upper[e] - rho.values[e]);
    }

    std::vector<double> values(rho.values.size(), 0.0);
    double s = 0.5 * (s_lo + s_hi);
    for (int it = 0; it < 200; ++it) {
        const double m = clipped_mass(rho, box, s, nullptr);
        if (std::abs(m - mass.M) <= mass_tol) break;
        if (m < mass.M)
            s_lo = s;
        else
            s_hi = s;
        s = 0.5 * (s_lo + s_hi);
    }
    // the clipped mass is linear in s on the free set, so a couple of Newton
    // corrections land on the target to rounding accuracy
    for (int polish = 0; polish < 2; ++polish) {
        const double m = clipped_mass(rho, box, s, &values);
        double free_h = 0.0;
        for (int e = 0; e < rho.size(); ++e)
            if (values[e] > box.lower[e] && values[e] < box.upper[e]) free_h += rho.widths[e];
        if (free_h == 0.0 || m == mass.M) break;
        s += (mass.M - m) / free_h;
    }
    clipped_mass(rho, box, s, &values);

    out.values = std::move(values);
    return out;
}

std::vector<double> tangent_projected_gradient(const GradientField& grad, const DensityField& rho) {
    double num = 0.0, den = 0.0;
    for (int e = 0; e < rho.size(); ++e) {
        num += grad.g[e] * rho.widths[e];
        den += rho.widths[e];
    }
    const double mean = num / den;
    std::vector<double> pg(grad.g.size());
    for (std::size_t e = 0; e < grad.g.size(); ++e) pg[e] = grad.g[e] - mean;
    return pg;
}

double active_set_residual(const GradientField& grad, const DensityField& rho, const BoxConstraint& box,
                           OptimizeSense sense) {
    const int n = rho.size();
    const double flip = (sense == OptimizeSense::minimize) ? 1.0 : -1.0;
    std::vector<double> ghat(n);
    std::vector<int> state(n); // -1 at lower bound, +1 at upper, 0 free
    double c_lo = std::numeric_limits<double>::infinity();
    double c_hi = -std::numeric_limits<double>::infinity();
    for (int e = 0; e < n; ++e) {
        ghat[e] = flip * grad.g[e] / rho.widths[e];
        state[e] = (rho.values[e] <= box.lower[e]) ? -1 : (rho.values[e] >= box.upper[e]) ? 1 : 0;
        c_lo = std::min(c_lo, ghat[e]);
        c_hi = std::max(c_hi, ghat[e]);
    }
    auto residual2 = [&](double c) {
        double acc = 0.0;
        for (int e = 0; e < n; ++e) {
            double r = 0.0;
            if (state[e] == 0)
                r = ghat[e] - c;
            else if (state[e] < 0)
                r = std::max(0.0, c - ghat[e]); // minimization wants ghat >= c at the lower bound
            else
                r = std::max(0.0, ghat[e] - c);
            acc += rho.widths[e] * r * r;
        }
        return acc;
    };
    // convex in the multiplier: ternary search over the hull of ghat
    double lo = c_lo - 1.0, hi = c_hi + 1.0;
    for (int it = 0; it < 200; ++it) {
        const double m1 = lo + (hi - lo) / 3.0;
        const double m2 = hi - (hi - lo) / 3.0;
        if (residual2(m1) <= residual2(m2))
            hi = m2;
        else
            lo = m1;
    }
    return std::sqrt(residual2(0.5 * (lo + hi)));
}

double bangbang_fraction(const DensityField& rho, const BoxConstraint& box, double eps) {
    double hit = 0.0, total = 0.0;
    for (int e = 0; e < rho.size(); ++e) {
        const double slack = std::min(rho.values[e] - box.lower[e], box.upper[e] - rho.values[e]);
        if (slack <= eps * (box.upper[e] - box.lower[e])) hit += rho.widths[e];
        total += rho.widths[e];
    }
    return hit / total;
}

namespace {

std::vector<int> cluster_signature(const ClusterSelection& sel) {
    std::vector<int> sig;
    for (const auto& b : sel.blocks) sig.push_back(b.size());
    return sig;
}

} // namespace

OptimizerTrace run(const ProblemSpec& spec, const DensityField& rho0, const IndexSet& f, int h,
                   OptimizeSense sense, const BoxConstraint& box, const MassConstraint& mass,
                   const OptimizerConfig& config) {
    const BasisDescriptor basis = build_basis(spec);
    const int max_f = *std::max_element(f.begin(), f.end());
    const int count = std::min(basis.dof(), max_f + 1);

    OptimizerTrace trace;
    DensityField rho = project(rho0, box, mass);

    double mean0 = 0.0;
    for (double v : rho.values) mean0 += v;
    mean0 /= rho.size();
    double alpha = (config.alpha0 > 0.0) ? config.alpha0 : 0.1 * mean0;

    std::vector<int> signature;
    const double sgn = (sense == OptimizeSense::minimize) ? -1.0 : 1.0;
    double last_step = 0.0;

    for (int iter = 0;; ++iter) {
        const SpectralDecomposition dec = eigenvalues(spec, rho, count);
        const ClusterPartition part = detect_clusters(dec.lambdas, config.cluster_tol);
        ClusterSelection sel;
        try {
            sel = validate_F(f, part);
        } catch (const std::invalid_argument& err) {
            trace.reason = StopReason::cluster_changed;
            trace.message = "F no longer isolated at iterate " + std::to_string(iter) + ": " + err.what();
            break;
        }
        if (iter == 0) {
            signature = cluster_signature(sel);
        } else if (cluster_signature(sel) != signature) {
            trace.reason = StopReason::cluster_changed;
            trace.message = "F no longer isolated at iterate " + std::to_string(iter) +
                            ": cluster structure changed";
            break;
        }

        const double objective = symmetric_value(dec, f, h);
        const GradientField grad = differential_from(spec, basis, dec, sel, h);
        const double pg = active_set_residual(grad, rho, box, sense);

        TracePoint point;
        point.iter = iter;
        point.objective = objective;
        point.step = last_step;
        point.pg_norm = pg;
        point.bangbang = bangbang_fraction(rho, box);
        trace.points.push_back(point);

        if (pg <= config.tol) {
            trace.reason = StopReason::converged;
            break;
        }
        if (iter >= config.max_iters) {
            trace.reason = StopReason::iteration_cap;
            break;
        }

        const double gnorm = norm2(Vector(grad.g.begin(), grad.g.end()));
        if (gnorm == 0.0) {
            trace.reason = StopReason::converged;
            break;
        }

        bool accepted = false;
        double step = alpha;
        for (int halving = 0; halving <= config.max_halvings; ++halving) {
            std::vector<double> trial_values(rho.values);
            for (int e = 0; e < rho.size(); ++e) trial_values[e] += sgn * step * grad.g[e] / gnorm;
            DensityField trial = project(density_from_values(spec, trial_values), box, mass);

            // first-order improvement available along the projected step
            double predicted = 0.0;
            for (int e = 0; e < rho.size(); ++e)
                predicted += sgn * grad.g[e] * (trial.values[e] - rho.values[e]);
            if (predicted <= 0.0) {
                step *= 0.5;
                continue;
            }
            const SpectralDecomposition trial_dec = eigenvalues(spec, trial, count);
            const double trial_obj = symmetric_value(trial_dec, f, h);
            const double improvement = sgn * (trial_obj - objective);
            if (improvement >= config.armijo * predicted) {
                rho = std::move(trial);
                last_step = step;
                alpha = (halving == 0) ? 2.0 * step : step;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) {
            trace.reason = StopReason::linesearch_failed;
            trace.message = "line search failed at iterate " + std::to_string(iter);
            break;
        }
    }

    trace.final_rho = rho;
    return trace;
}

double stationarity_residual(const ProblemSpec& spec, const DensityField& rho, const IndexSet& f, int h,
                             double tol_rel) {
    const BasisDescriptor basis = build_basis(spec);
    const int max_f = *std::max_element(f.begin(), f.end());
    const int count = std::min(basis.dof(), max_f + 1);
    const SpectralDecomposition dec = eigenvalues(spec, rho, count);
    const ClusterPartition part = detect_clusters(dec.lambdas, tol_rel);
    const ClusterSelection sel = validate_F(f, part);

    double scale = 0.0;
    for (int j : f) scale = std::max(scale, std::abs(dec.lambdas[j - 1]));
    int sign = 0;
    for (int j : f) {
        const double l = dec.lambdas[j - 1];
        if (std::abs(l) <= 1e-12 * std::max(1.0, scale))
            throw std::invalid_argument("stationarity_residual: eigenvalue " + std::to_string(j) +
                                        " vanishes; hypothesis of the maximum principle fails");
        const int s = (l > 0.0) ? 1 : -1;
        if (sign == 0) sign = s;
        if (s != sign)
            throw std::invalid_argument("stationarity_residual: eigenvalues in F have mixed signs");
    }

    std::vector<double> values;
    std::vector<int> sizes;
    for (const auto& blk : sel.blocks) {
        values.push_back(blk.value);
        sizes.push_back(blk.size());
    }
    const std::vector<double> c = ck_coefficients(values, sizes, h);

    // w at the quadrature points, weighted by the quadrature measure
    const ElementTables tab = build_element_tables(spec, basis, 0);
    const int q = tab.rule.size();
    const int p = spec.p;
    const int kcon = spec.k;
    const int n_full = basis.n_basis();

    double wsum = 0.0, mean = 0.0;
    std::vector<double> wvals;
    std::vector<double> wweights;
    wvals.reserve(static_cast<std::size_t>(spec.n_e) * q);
    wweights.reserve(wvals.capacity());
    for (int e = 0; e < spec.n_e; ++e) {
        for (int g = 0; g < q; ++g) {
            double w = 0.0;
            for (int kb = 0; kb < sel.n(); ++kb) {
                const auto& blk = sel.blocks[kb];
                for (int l = blk.first; l <= blk.last; ++l) {
                    double u = 0.0;
                    for (int j = 0; j <= p; ++j) {
                        const int gj = tab.first_index[e] + j;
                        if (gj < kcon || gj >= n_full - kcon) continue;
                        u += dec.vectors[l - 1][gj - kcon] * tab.values[e][0][j][g];
                    }
                    w += c[kb] * u * u;
                }
            }
            const double weight = tab.rule.weights[g] * tab.jacobian;
            wvals.push_back(w);
            wweights.push_back(weight);
            wsum += weight;
            mean += weight * w;
        }
    }
    mean /= wsum;
    double var = 0.0;
    for (std::size_t i = 0; i < wvals.size(); ++i)
        var += wweights[i] * (wvals[i] - mean) * (wvals[i] - mean);
    var /= wsum;
    return std::sqrt(var) / std::abs(mean);
}

ExperimentReport interior_scan(const ProblemSpec& spec, const BoxConstraint& box, const MassConstraint& mass,
                               const IndexSet& f, int h, int samples, std::uint64_t seed, double tol) {
    ExperimentReport report;
    report.name = "interior_scan";
    Rng rng(seed);
    const int max_attempts = samples * 1000;

    int accepted = 0;
    for (int attempt = 0; attempt < max_attempts && accepted < samples; ++attempt) {
        std::vector<double> draw(spec.n_e);
        for (int e = 0; e < spec.n_e; ++e) draw[e] = rng.uniform(box.lower[e], box.upper[e]);
        DensityField rho = project(density_from_values(spec, draw), box, mass);
        bool interior = true;
        for (int e = 0; e < spec.n_e; ++e)
            if (rho.values[e] <= box.lower[e] || rho.values[e] >= box.upper[e]) {
                interior = false;
                break;
            }
        if (!interior) continue;

        const GradientField grad = differential(spec, rho, f, h);
        const std::vector<double> pg = tangent_projected_gradient(grad, rho);
        const double pg_norm = norm2(Vector(pg.begin(), pg.end()));
        report.rows.push_back(ExperimentRow{"sample=" + std::to_string(accepted), pg_norm, tol,
                                            pg_norm - tol, pg_norm > tol});
        ++accepted;
    }
    if (accepted < samples)
        throw std::runtime_error("interior_scan: could not draw enough strictly interior samples");
    return report;
}

} // namespace masslab
