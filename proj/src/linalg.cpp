#include "bcfem/linalg.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

#include "bcfem/errors.hpp"

namespace bcfem::linalg {

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

namespace {

// Right-looking LU with partial pivoting.  The trailing update is row-parallel
// when `parallel` is set; each row is an independent fixed-order axpy, so the
// parallel and serial paths produce identical bits.
LuFactors lu_factor_impl(const DenseMatrix& a, bool parallel) {
    const std::size_t n = a.rows();
    if (n != a.cols()) throw DomainError("lu_factor: matrix must be square");
    LuFactors f{a, std::vector<std::size_t>(n)};
    double* lu = f.lu.data();
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        double best = std::abs(lu[k * n + k]);
        for (std::size_t i = k + 1; i < n; ++i) {
            const double v = std::abs(lu[i * n + k]);
            if (v > best) { best = v; p = i; }
        }
        if (best == 0.0 || !std::isfinite(best))
            throw SingularMatrixError("lu_factor: zero pivot at column " + std::to_string(k));
        f.pivots[k] = p;
        if (p != k)
            for (std::size_t j = 0; j < n; ++j) std::swap(lu[k * n + j], lu[p * n + j]);
        const double piv = lu[k * n + k];
        const std::size_t m = n - k - 1;
#pragma omp parallel for schedule(static) if (parallel && m > 64)
        for (std::size_t i = k + 1; i < n; ++i) {
            const double l = lu[i * n + k] / piv;
            lu[i * n + k] = l;
            for (std::size_t j = k + 1; j < n; ++j) lu[i * n + j] -= l * lu[k * n + j];
        }
    }
    return f;
}

}  // namespace

LuFactors lu_factor(const DenseMatrix& a) { return lu_factor_impl(a, true); }

LuFactors serial_ref::lu_factor(const DenseMatrix& a) { return lu_factor_impl(a, false); }

Vector lu_solve(const LuFactors& f, std::span<const double> rhs) {
    const std::size_t n = f.lu.rows();
    if (rhs.size() != n) throw DomainError("lu_solve: rhs size mismatch");
    Vector x(rhs.begin(), rhs.end());
    const double* lu = f.lu.data();
    for (std::size_t k = 0; k < n; ++k)
        if (f.pivots[k] != k) std::swap(x[k], x[f.pivots[k]]);
    for (std::size_t i = 1; i < n; ++i) {
        double s = x[i];
        for (std::size_t j = 0; j < i; ++j) s -= lu[i * n + j] * x[j];
        x[i] = s;
    }
    for (std::size_t ii = n; ii-- > 0;) {
        double s = x[ii];
        for (std::size_t j = ii + 1; j < n; ++j) s -= lu[ii * n + j] * x[j];
        x[ii] = s / lu[ii * n + ii];
    }
    return x;
}

Vector matvec_serial(const DenseMatrix& a, std::span<const double> x) {
    if (x.size() != a.cols()) throw DomainError("matvec: dimension mismatch");
    Vector y(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        double s = 0.0;
        const double* row = a.data() + i * a.cols();
        for (std::size_t j = 0; j < a.cols(); ++j) s += row[j] * x[j];
        y[i] = s;
    }
    return y;
}

Vector matvec(const DenseMatrix& a, std::span<const double> x) {
    if (x.size() != a.cols()) throw DomainError("matvec: dimension mismatch");
    Vector y(a.rows());
    const std::size_t n = a.rows(), m = a.cols();
#pragma omp parallel for schedule(static) if (n > 128)
    for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        const double* row = a.data() + i * m;
        for (std::size_t j = 0; j < m; ++j) s += row[j] * x[j];
        y[i] = s;
    }
    return y;
}

double norm2(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

double norm_inf(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s = std::max(s, std::abs(x));
    return s;
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
    assert(x.size() == y.size());
    for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

Vector gather(std::span<const double> v, std::span<const std::size_t> idx) {
    Vector out(idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i) {
        if (idx[i] >= v.size()) throw DomainError("gather: index out of range");
        out[i] = v[idx[i]];
    }
    return out;
}

void scatter(std::span<const double> compact, std::span<const std::size_t> idx,
             std::span<double> v) {
    if (compact.size() != idx.size()) throw DomainError("scatter: size mismatch");
    for (std::size_t i = 0; i < idx.size(); ++i) {
        if (idx[i] >= v.size()) throw DomainError("scatter: index out of range");
        v[idx[i]] = compact[i];
    }
}

DenseMatrix submatrix(const DenseMatrix& a, std::span<const std::size_t> idx) {
    DenseMatrix s(idx.size(), idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i) {
        if (idx[i] >= a.rows()) throw DomainError("submatrix: index out of range");
        for (std::size_t j = 0; j < idx.size(); ++j) s(i, j) = a(idx[i], idx[j]);
    }
    return s;
}

}  // namespace bcfem::linalg
