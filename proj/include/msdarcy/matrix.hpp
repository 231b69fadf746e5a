#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace msdarcy {

/// Small dense row-major matrix.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  /// Entries listed row by row; the list length must equal rows*cols.
  DenseMatrix(std::size_t rows, std::size_t cols, std::initializer_list<double> entries);

  static DenseMatrix identity(std::size_t n);
  static DenseMatrix diagonal(std::span<const double> d);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool square() const noexcept { return rows_ == cols_; }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<double> data() noexcept { return data_; }
  std::span<const double> data() const noexcept { return data_; }

  DenseMatrix transposed() const;
  std::vector<double> apply(std::span<const double> x) const;

  DenseMatrix& operator+=(const DenseMatrix& other);
  DenseMatrix& operator-=(const DenseMatrix& other);
  DenseMatrix& operator*=(double s);

  double max_abs() const;
  double frobenius_norm() const;

  friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

DenseMatrix operator+(DenseMatrix a, const DenseMatrix& b);
DenseMatrix operator-(DenseMatrix a, const DenseMatrix& b);
DenseMatrix operator*(DenseMatrix a, double s);
DenseMatrix operator*(double s, DenseMatrix a);
DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b);

/// Kronecker product: block (i,j) of the result is a(i,j)*b.
DenseMatrix kron(const DenseMatrix& a, const DenseMatrix& b);

/// Stacks vectors x_1..x_n of equal length d into the nd x n matrix whose
/// column i holds x_i in rows i*d..i*d+d-1.
DenseMatrix blockdiag_vec(std::span<const std::vector<double>> blocks);

/// Block-diagonal matrix with square blocks of equal size.
DenseMatrix blockdiag_mat(std::span<const DenseMatrix> blocks);

DenseMatrix hadamard(const DenseMatrix& a, const DenseMatrix& b);

DenseMatrix symmetric_part(const DenseMatrix& a);

/// Max absolute entry of a - a^T.
double asymmetry(const DenseMatrix& a);

struct SymmetricEigen {
  std::vector<double> values;  // ascending
  DenseMatrix vectors;         // column k belongs to values[k]
};

/// Cyclic Jacobi eigensolver; only the upper triangle of `a` is read.
SymmetricEigen symmetric_eigen(const DenseMatrix& a);

/// In-place Jacobi eigensolver on a row-major n x n buffer used by hot loops.
/// On return `values` holds eigenvalues (unsorted) and `vectors` (row-major)
/// holds eigenvectors in its columns. `a` is destroyed.
void jacobi_eigen_inplace(std::size_t n, double* a, double* values, double* vectors);

/// Singular values in descending order (one-sided Jacobi).
std::vector<double> singular_values(const DenseMatrix& a);

/// Solves a x = b by Gaussian elimination with partial pivoting.
/// Throws InternalError for a numerically singular matrix.
std::vector<double> solve(DenseMatrix a, std::vector<double> b);

/// Lower Cholesky factor of a symmetric positive definite matrix.
/// Throws InternalError if a pivot is not positive.
DenseMatrix cholesky_lower(const DenseMatrix& a);

/// Inverse of a lower-triangular matrix.
DenseMatrix lower_triangular_inverse(const DenseMatrix& l);

}  // namespace msdarcy
