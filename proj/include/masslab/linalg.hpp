#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace masslab {

using Vector = std::vector<double>;

/// Dense row-major matrix. Everything in this project is small (dof of a few
/// hundred at most), so dense storage and O(n^3) factorizations are the
/// simplest correct choice.
class Matrix {
public:
    Matrix() = default;
    Matrix(int rows, int cols) : rows_(rows), cols_(cols), a_(static_cast<std::size_t>(rows) * cols, 0.0) {}

    static Matrix identity(int n);

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    double& operator()(int i, int j) { return a_[static_cast<std::size_t>(i) * cols_ + j]; }
    double operator()(int i, int j) const { return a_[static_cast<std::size_t>(i) * cols_ + j]; }

    const double* data() const { return a_.data(); }
    double* data() { return a_.data(); }

    Vector multiply(const Vector& x) const;
    double frobenius_norm() const;
    double max_abs_asymmetry() const;

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<double> a_;
};

// Basic vector helpers.
double dot(const Vector& x, const Vector& y);
double norm2(const Vector& x);
Vector axpy(double a, const Vector& x, const Vector& y); // a*x + y

/// Result of a standard symmetric eigenproblem: values ascending, eigenvectors
/// stored as columns of `vectors`, orthonormal.
struct EigenResult {
    Vector values;
    Matrix vectors;
};

/// Generalized decomposition K v = lambda M v with M positive definite.
/// Eigenvalues ascend (repeated by multiplicity), vectors are M-orthonormal,
/// `residual` is the largest relative residual
///   ||K v - lambda M v||_2 / (||K||_F + |lambda| ||M||_F)
/// over the returned pairs.
struct SpectralDecomposition {
    Vector lambdas;
    std::vector<Vector> vectors;
    double residual = 0.0;

    int count() const { return static_cast<int>(lambdas.size()); }
};

/// Cholesky factorization M = L L^T, L lower triangular. Throws
/// std::runtime_error naming the offending pivot if M is not positive
/// definite.
Matrix cholesky(const Matrix& m);

/// Forward/back substitution with a lower triangular factor.
Vector solve_lower(const Matrix& l, const Vector& b);          // L y = b
Vector solve_lower_transposed(const Matrix& l, const Vector& b); // L^T x = b

/// Dense symmetric eigensolver: Householder tridiagonalization followed by
/// implicit-shift QL. Deterministic: fixed sweep order, eigenvalues sorted
/// ascending with index-stable ties, and each eigenvector is scaled so that
/// its entry of largest magnitude (lowest index on ties) is positive.
EigenResult sym_eig(const Matrix& a);

/// Solves K v = lambda M v via Cholesky reduction L^{-1} K L^{-T} y = lambda y,
/// v = L^{-T} y. Returns the first `count` pairs.
SpectralDecomposition generalized_eig(const Matrix& k, const Matrix& m, int count);

/// Applies the deterministic sign convention in place.
void canonicalize_sign(Vector& v);

} // namespace masslab
