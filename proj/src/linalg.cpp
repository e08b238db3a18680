#include "masslab/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace masslab {

Matrix Matrix::identity(int n) {
    Matrix I(n, n);
    for (int i = 0; i < n; ++i) I(i, i) = 1.0;
    return I;
}

Vector Matrix::multiply(const Vector& x) const {
    Vector y(rows_, 0.0);
    for (int i = 0; i < rows_; ++i) {
        double s = 0.0;
        const double* row = a_.data() + static_cast<std::size_t>(i) * cols_;
        for (int j = 0; j < cols_; ++j) s += row[j] * x[j];
        y[i] = s;
    }
    return y;
}

double Matrix::frobenius_norm() const {
    double s = 0.0;
    for (double v : a_) s += v * v;
    return std::sqrt(s);
}

double Matrix::max_abs_asymmetry() const {
    double w = 0.0;
    for (int i = 0; i < rows_; ++i)
        for (int j = i + 1; j < cols_; ++j) w = std::max(w, std::abs((*this)(i, j) - (*this)(j, i)));
    return w;
}

double dot(const Vector& x, const Vector& y) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
    return s;
}

double norm2(const Vector& x) { return std::sqrt(dot(x, x)); }

Vector axpy(double a, const Vector& x, const Vector& y) {
    Vector z(y);
    for (std::size_t i = 0; i < x.size(); ++i) z[i] += a * x[i];
    return z;
}

Matrix cholesky(const Matrix& m) {
    const int n = m.rows();
    if (n != m.cols()) throw std::invalid_argument("cholesky: matrix must be square");
    Matrix l(n, n);
    for (int j = 0; j < n; ++j) {
        double d = m(j, j);
        for (int k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
        if (!(d > 0.0))
            throw std::runtime_error("cholesky: matrix not positive definite at pivot " + std::to_string(j));
        const double ljj = std::sqrt(d);
        l(j, j) = ljj;
        for (int i = j + 1; i < n; ++i) {
            double s = m(i, j);
            for (int k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
            l(i, j) = s / ljj;
        }
    }
    return l;
}

Vector solve_lower(const Matrix& l, const Vector& b) {
    const int n = l.rows();
    Vector y(b);
    for (int i = 0; i < n; ++i) {
        double s = y[i];
        for (int k = 0; k < i; ++k) s -= l(i, k) * y[k];
        y[i] = s / l(i, i);
    }
    return y;
}

Vector solve_lower_transposed(const Matrix& l, const Vector& b) {
    const int n = l.rows();
    Vector x(b);
    for (int i = n - 1; i >= 0; --i) {
        double s = x[i];
        for (int k = i + 1; k < n; ++k) s -= l(k, i) * x[k];
        x[i] = s / l(i, i);
    }
    return x;
}

void canonicalize_sign(Vector& v) {
    int arg = 0;
    double best = std::abs(v[0]);
    for (std::size_t i = 1; i < v.size(); ++i) {
        const double a = std::abs(v[i]);
        if (a > best) {
            best = a;
            arg = static_cast<int>(i);
        }
    }
    if (v[arg] < 0.0)
        for (double& x : v) x = -x;
}

namespace {

// Householder reduction of a symmetric matrix to tridiagonal form with
// accumulation of the orthogonal transformation in `z`. On exit d holds the
// diagonal, e the subdiagonal in e[1..n-1].
void householder_tridiag(Matrix& z, Vector& d, Vector& e) {
    const int n = z.rows();
    for (int i = n - 1; i >= 1; --i) {
        const int l = i - 1;
        double h = 0.0;
        double scale = 0.0;
        if (l > 0) {
            for (int k = 0; k <= l; ++k) scale += std::abs(z(i, k));
            if (scale == 0.0) {
                e[i] = z(i, l);
            } else {
                for (int k = 0; k <= l; ++k) {
                    z(i, k) /= scale;
                    h += z(i, k) * z(i, k);
                }
                double f = z(i, l);
                double g = (f >= 0.0) ? -std::sqrt(h) : std::sqrt(h);
                e[i] = scale * g;
                h -= f * g;
                z(i, l) = f - g;
                f = 0.0;
                for (int j = 0; j <= l; ++j) {
                    z(j, i) = z(i, j) / h;
                    g = 0.0;
                    for (int k = 0; k <= j; ++k) g += z(j, k) * z(i, k);
                    for (int k = j + 1; k <= l; ++k) g += z(k, j) * z(i, k);
                    e[j] = g / h;
                    f += e[j] * z(i, j);
                }
                const double hh = f / (h + h);
                for (int j = 0; j <= l; ++j) {
                    f = z(i, j);
                    e[j] = g = e[j] - hh * f;
                    for (int k = 0; k <= j; ++k) z(j, k) -= f * e[k] + g * z(i, k);
                }
            }
        } else {
            e[i] = z(i, l);
        }
        d[i] = h;
    }
    d[0] = 0.0;
    e[0] = 0.0;
    for (int i = 0; i < n; ++i) {
        const int l = i - 1;
        if (d[i] != 0.0) {
            for (int j = 0; j <= l; ++j) {
                double g = 0.0;
                for (int k = 0; k <= l; ++k) g += z(i, k) * z(k, j);
                for (int k = 0; k <= l; ++k) z(k, j) -= g * z(k, i);
            }
        }
        d[i] = z(i, i);
        z(i, i) = 1.0;
        for (int j = 0; j <= l; ++j) z(j, i) = z(i, j) = 0.0;
    }
}

// Implicit-shift QL on the tridiagonal (d, e); rotations are applied to the
// columns of z. Convergence: off-diagonal negligible relative to its diagonal
// neighbours. A sweep performs at most n rotations, and each eigenvalue is
// allowed 30 sweeps.
void ql_implicit_shift(Matrix& z, Vector& d, Vector& e) {
    const int n = z.rows();
    const double eps = std::numeric_limits<double>::epsilon();
    for (int i = 1; i < n; ++i) e[i - 1] = e[i];
    e[n - 1] = 0.0;
    for (int l = 0; l < n; ++l) {
        int iter = 0;
        int m;
        do {
            for (m = l; m < n - 1; ++m) {
                const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
                if (std::abs(e[m]) <= eps * dd) break;
            }
            if (m != l) {
                if (iter++ == 30)
                    throw std::runtime_error("sym_eig: QL failed to converge for eigenvalue " +
                                             std::to_string(l) + " after 30 sweeps (~30*dim rotations)");
                double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                double r = std::hypot(g, 1.0);
                g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
                double s = 1.0, c = 1.0, p = 0.0;
                int i;
                for (i = m - 1; i >= l; --i) {
                    double f = s * e[i];
                    const double b = c * e[i];
                    r = std::hypot(f, g);
                    e[i + 1] = r;
                    if (r == 0.0) {
                        d[i + 1] -= p;
                        e[m] = 0.0;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - p;
                    r = (d[i] - g) * s + 2.0 * c * b;
                    p = s * r;
                    d[i + 1] = g + p;
                    g = c * r - b;
                    for (int k = 0; k < n; ++k) {
                        f = z(k, i + 1);
                        z(k, i + 1) = s * z(k, i) + c * f;
                        z(k, i) = c * z(k, i) - s * f;
                    }
                }
                if (r == 0.0 && i >= l) continue;
                d[l] -= p;
                e[l] = g;
                e[m] = 0.0;
            }
        } while (m != l);
    }
}

} // namespace

EigenResult sym_eig(const Matrix& a) {
    const int n = a.rows();
    if (n != a.cols()) throw std::invalid_argument("sym_eig: matrix must be square");
    if (n == 0) return {};

    Matrix z = a;
    Vector d(n, 0.0), e(n, 0.0);
    householder_tridiag(z, d, e);
    ql_implicit_shift(z, d, e);

    // ascending sort, stable in the original index on ties
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&d](int i, int j) { return d[i] < d[j]; });

    EigenResult res;
    res.values.resize(n);
    res.vectors = Matrix(n, n);
    for (int j = 0; j < n; ++j) {
        res.values[j] = d[order[j]];
        Vector col(n);
        for (int i = 0; i < n; ++i) col[i] = z(i, order[j]);
        canonicalize_sign(col);
        for (int i = 0; i < n; ++i) res.vectors(i, j) = col[i];
    }
    return res;
}

SpectralDecomposition generalized_eig(const Matrix& k, const Matrix& m, int count) {
    const int n = k.rows();
    if (n != k.cols() || n != m.rows() || n != m.cols())
        throw std::invalid_argument("generalized_eig: dimension mismatch");
    if (count < 0 || count > n) throw std::invalid_argument("generalized_eig: count exceeds dimension");

    const Matrix l = cholesky(m);

    // C = L^{-1} K L^{-T}, assembled column by column and symmetrized so the
    // tridiagonalization sees an exactly symmetric matrix.
    Matrix w(n, n);
    for (int j = 0; j < n; ++j) {
        Vector col(n);
        for (int i = 0; i < n; ++i) col[i] = k(i, j);
        Vector y = solve_lower(l, col);
        for (int i = 0; i < n; ++i) w(i, j) = y[i];
    }
    Matrix c(n, n);
    for (int i = 0; i < n; ++i) {
        Vector row(n);
        for (int j = 0; j < n; ++j) row[j] = w(i, j);
        Vector y = solve_lower(l, row);
        for (int j = 0; j < n; ++j) c(i, j) = y[j];
    }
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const double s = 0.5 * (c(i, j) + c(j, i));
            c(i, j) = c(j, i) = s;
        }

    EigenResult eig = sym_eig(c);

    SpectralDecomposition dec;
    dec.lambdas.assign(eig.values.begin(), eig.values.begin() + count);
    dec.vectors.reserve(count);
    const double kf = k.frobenius_norm();
    const double mf = m.frobenius_norm();
    double worst = 0.0;
    for (int j = 0; j < count; ++j) {
        Vector y(n);
        for (int i = 0; i < n; ++i) y[i] = eig.vectors(i, j);
        Vector v = solve_lower_transposed(l, y);
        canonicalize_sign(v);
        Vector kv = k.multiply(v);
        Vector mv = m.multiply(v);
        double r = 0.0;
        for (int i = 0; i < n; ++i) {
            const double q = kv[i] - dec.lambdas[j] * mv[i];
            r += q * q;
        }
        const double denom = kf + std::abs(dec.lambdas[j]) * mf;
        worst = std::max(worst, std::sqrt(r) / (denom > 0.0 ? denom : 1.0));
        dec.vectors.push_back(std::move(v));
    }
    dec.residual = worst;
    return dec;
}

} // namespace masslab
