#include "masslab/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace masslab {

int ClusterSelection::total_size() const {
    int s = 0;
    for (const auto& b : blocks) s += b.size();
    return s;
}

double GradientField::pair(const std::vector<double>& rho_dot) const {
    double s = 0.0;
    for (std::size_t e = 0; e < g.size(); ++e) s += g[e] * rho_dot[e];
    return s;
}

SpectralDecomposition eigenvalues(const ProblemSpec& spec, const DensityField& rho, int count) {
    const BasisDescriptor basis = build_basis(spec);
    if (count < 1 || count > basis.dof())
        throw std::invalid_argument("eigenvalues: count exceeds dof (" + std::to_string(basis.dof()) + ")");
    const GramSet gram = assemble(spec, basis, rho);
    return generalized_eig(gram.K, gram.M, count);
}

ClusterPartition detect_clusters(const Vector& lambdas, double tol_rel) {
    ClusterPartition part;
    part.tol = tol_rel;
    if (lambdas.empty()) return part;

    int first = 1;
    double sum = lambdas[0];
    for (std::size_t j = 1; j <= lambdas.size(); ++j) {
        const bool close = j < lambdas.size() &&
                           std::abs(lambdas[j] - lambdas[j - 1]) <= tol_rel * std::max(1.0, std::abs(lambdas[j - 1]));
        if (close) {
            sum += lambdas[j];
            continue;
        }
        ClusterPartition::Cluster c;
        c.first = first;
        c.last = static_cast<int>(j);
        c.value = sum / c.size();
        part.clusters.push_back(c);
        if (j < lambdas.size()) {
            first = static_cast<int>(j) + 1;
            sum = lambdas[j];
        }
    }
    return part;
}

ClusterSelection validate_F(const IndexSet& f, const ClusterPartition& partition) {
    if (f.empty()) throw std::invalid_argument("validate_F: F must be nonempty");
    IndexSet sorted = f;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    if (sorted.size() != f.size()) throw std::invalid_argument("validate_F: F must not repeat indices");
    if (sorted.front() < 1 || sorted.back() > partition.range_end())
        throw std::invalid_argument("validate_F: F outside the analyzed index range [1, " +
                                    std::to_string(partition.range_end()) + "]");

    ClusterSelection sel;
    std::size_t pos = 0;
    while (pos < sorted.size()) {
        const int j = sorted[pos];
        const auto it = std::find_if(partition.clusters.begin(), partition.clusters.end(),
                                     [j](const ClusterPartition::Cluster& c) { return c.contains(j); });
        const ClusterPartition::Cluster& c = *it;
        for (int l = c.first; l <= c.last; ++l) {
            if (pos >= sorted.size() || sorted[pos] != l)
                throw std::invalid_argument("validate_F: F splits cluster {" + std::to_string(c.first) + ".." +
                                            std::to_string(c.last) + "}; rho is not in R[F] numerically");
            ++pos;
        }
        sel.blocks.push_back(c);
    }
    return sel;
}

std::int64_t binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    if (n > 20) throw std::invalid_argument("binomial: cluster sizes beyond 20 are not supported");
    std::int64_t r = 1;
    k = std::min(k, n - k);
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

double elementary_symmetric(const std::vector<double>& values, int h) {
    const int n = static_cast<int>(values.size());
    if (h < 0 || h > n)
        throw std::invalid_argument("elementary_symmetric: h must satisfy 0 <= h <= " + std::to_string(n));
    std::vector<double> e(h + 1, 0.0);
    e[0] = 1.0;
    for (int i = 0; i < n; ++i) {
        const int top = std::min(h, i + 1);
        for (int j = top; j >= 1; --j) e[j] += values[i] * e[j - 1];
    }
    return e[h];
}

namespace {

double int_pow(double x, int n) {
    double r = 1.0;
    for (int i = 0; i < n; ++i) r *= x;
    return r;
}

// Visits all (h_1, ..., h_n) with 0 <= h_j <= caps[j] and sum h_j = h.
template <typename Fn>
void for_each_composition(const std::vector<int>& caps, int h, Fn&& fn) {
    const int n = static_cast<int>(caps.size());
    std::vector<int> parts(n, 0);
    auto rec = [&](auto&& self, int level, int remaining) -> void {
        if (level == n) {
            if (remaining == 0) fn(parts);
            return;
        }
        for (int t = 0; t <= std::min(caps[level], remaining); ++t) {
            parts[level] = t;
            self(self, level + 1, remaining - t);
        }
        parts[level] = 0;
    };
    rec(rec, 0, h);
}

} // namespace

std::pair<double, double> shift_identity_check(const std::vector<double>& values, double b, int h) {
    if (b < 0.0) throw std::invalid_argument("shift_identity_check: b must be >= 0");
    const int size = static_cast<int>(values.size());
    const double direct = elementary_symmetric(values, h);

    std::vector<double> shifted(values);
    for (double& v : shifted) v += b;
    double via = 0.0;
    for (int k = 0; k <= h; ++k)
        via += int_pow(-b, h - k) * static_cast<double>(binomial(size - k, h - k)) *
               elementary_symmetric(shifted, k);
    return {direct, via};
}

std::pair<double, double> block_identity_check(const std::vector<std::vector<double>>& blocks, int h) {
    std::vector<double> pooled;
    std::vector<int> caps;
    for (const auto& blk : blocks) {
        pooled.insert(pooled.end(), blk.begin(), blk.end());
        caps.push_back(static_cast<int>(blk.size()));
    }
    const double direct = elementary_symmetric(pooled, h);

    // convolution over blocks: conv[j] accumulates sum over h_1+..+h_i = j of
    // prod Lambda_{F_i, h_i}
    std::vector<double> conv{1.0};
    for (const auto& blk : blocks) {
        const int cap = static_cast<int>(blk.size());
        std::vector<double> next(std::min<std::size_t>(conv.size() + cap, h + 1), 0.0);
        for (std::size_t j = 0; j < conv.size(); ++j)
            for (int t = 0; t <= cap && j + t <= static_cast<std::size_t>(h); ++t)
                if (j + t < next.size()) next[j + t] += conv[j] * elementary_symmetric(blk, t);
        conv = std::move(next);
    }
    const double via = (static_cast<std::size_t>(h) < conv.size()) ? conv[h] : 0.0;
    return {direct, via};
}

std::vector<double> ck_coefficients(const std::vector<double>& values, const std::vector<int>& sizes, int h) {
    const int n = static_cast<int>(values.size());
    if (static_cast<int>(sizes.size()) != n)
        throw std::invalid_argument("ck_coefficients: values and sizes disagree");
    int total = 0;
    for (int s : sizes) {
        if (s < 1) throw std::invalid_argument("ck_coefficients: cluster sizes must be >= 1");
        total += s;
    }
    if (h < 1 || h > total)
        throw std::invalid_argument("ck_coefficients: h must satisfy 1 <= h <= " + std::to_string(total));

    std::vector<double> c(n, 0.0);
    for_each_composition(sizes, h, [&](const std::vector<int>& parts) {
        for (int k = 0; k < n; ++k) {
            if (parts[k] == 0) continue; // C(|F_k|-1, -1) = 0
            double term =
                static_cast<double>(binomial(sizes[k] - 1, parts[k] - 1)) * int_pow(values[k], parts[k]);
            for (int j = 0; j < n; ++j) {
                if (j == k) continue;
                term *= static_cast<double>(binomial(sizes[j], parts[j])) * int_pow(values[j], parts[j]);
            }
            c[k] += term;
        }
    });
    return c;
}

double symmetric_value(const SpectralDecomposition& dec, const IndexSet& f, int h) {
    std::vector<double> vals;
    vals.reserve(f.size());
    for (int j : f) {
        if (j < 1 || j > dec.count())
            throw std::invalid_argument("symmetric_value: index " + std::to_string(j) + " outside decomposition");
        vals.push_back(dec.lambdas[j - 1]);
    }
    return elementary_symmetric(vals, h);
}

GradientField differential_from(const ProblemSpec& spec, const BasisDescriptor& basis,
                                const SpectralDecomposition& dec, const ClusterSelection& sel, int h) {
    std::vector<double> values;
    std::vector<int> sizes;
    for (const auto& blk : sel.blocks) {
        values.push_back(blk.value);
        sizes.push_back(blk.size());
    }
    const std::vector<double> c = ck_coefficients(values, sizes, h);

    GradientField grad;
    grad.g.assign(spec.n_e, 0.0);
    for (int k = 0; k < sel.n(); ++k) {
        const auto& blk = sel.blocks[k];
        for (int l = blk.first; l <= blk.last; ++l) {
            const std::vector<double> sq = element_square_integrals(spec, basis, dec.vectors[l - 1]);
            for (int e = 0; e < spec.n_e; ++e) grad.g[e] -= c[k] * sq[e];
        }
    }
    return grad;
}

GradientField differential(const ProblemSpec& spec, const DensityField& rho, const IndexSet& f, int h,
                           double tol_rel) {
    if (f.empty()) throw std::invalid_argument("differential: F must be nonempty");
    const BasisDescriptor basis = build_basis(spec);
    const int max_f = *std::max_element(f.begin(), f.end());
    const int count = std::min(basis.dof(), max_f + 1);
    const SpectralDecomposition dec = eigenvalues(spec, rho, count);
    const ClusterPartition part = detect_clusters(dec.lambdas, tol_rel);
    const ClusterSelection sel = validate_F(f, part);
    if (h < 1 || h > sel.total_size())
        throw std::invalid_argument("differential: h must satisfy 1 <= h <= |F|");
    return differential_from(spec, basis, dec, sel, h);
}

} // namespace masslab
