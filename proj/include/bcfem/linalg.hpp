#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace bcfem::linalg {

using Vector = std::vector<double>;

// Row-major dense matrix.
class DenseMatrix {
  public:
    DenseMatrix() = default;
    DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }

    std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
    std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

  private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<double> data_;
};

// Packed LU factorization with partial pivoting, PA = LU.
struct LuFactors {
    DenseMatrix lu;
    std::vector<std::size_t> pivots;
};

// Throws SingularMatrixError on a (near-)zero pivot.
LuFactors lu_factor(const DenseMatrix& a);
Vector lu_solve(const LuFactors& f, std::span<const double> rhs);

// y = A x.  The OpenMP kernel distributes rows; each entry is accumulated in a
// fixed order, so results are bit-identical to the serial reference.
Vector matvec(const DenseMatrix& a, std::span<const double> x);
Vector matvec_serial(const DenseMatrix& a, std::span<const double> x);

double norm2(std::span<const double> v);
double norm_inf(std::span<const double> v);

void axpy(double alpha, std::span<const double> x, std::span<double> y);

// Gather entries of v at the given indices into a compact vector.
Vector gather(std::span<const double> v, std::span<const std::size_t> idx);
// Scatter compact values back; entries not in idx are untouched.
void scatter(std::span<const double> compact, std::span<const std::size_t> idx,
             std::span<double> v);

// Submatrix A(idx, idx), used for reduced-space Newton systems.
DenseMatrix submatrix(const DenseMatrix& a, std::span<const std::size_t> idx);

// Serial reference implementations kept for kernel testing/benchmarking.
namespace serial_ref {
LuFactors lu_factor(const DenseMatrix& a);
}

}  // namespace bcfem::linalg
