#include "msdarcy/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "msdarcy/errors.hpp"

namespace msdarcy {

namespace {

void require_same_shape(const DenseMatrix& a, const DenseMatrix& b, const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError(std::string(op) + ": shape mismatch " + std::to_string(a.rows()) + "x" +
                         std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) + "x" +
                         std::to_string(b.cols()));
  }
}

}  // namespace

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, std::initializer_list<double> entries)
    : rows_(rows), cols_(cols), data_(entries) {
  if (data_.size() != rows * cols) {
    throw DimensionError("DenseMatrix: expected " + std::to_string(rows * cols) + " entries, got " +
                         std::to_string(data_.size()));
  }
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

DenseMatrix DenseMatrix::diagonal(std::span<const double> d) {
  DenseMatrix m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

DenseMatrix DenseMatrix::transposed() const {
  DenseMatrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

std::vector<double> DenseMatrix::apply(std::span<const double> x) const {
  if (x.size() != cols_) throw DimensionError("DenseMatrix::apply: vector length mismatch");
  std::vector<double> y(rows_, 0.0);
  for (std::size_t r = 0; r < rows_; ++r) {
    double acc = 0.0;
    for (std::size_t c = 0; c < cols_; ++c) acc += (*this)(r, c) * x[c];
    y[r] = acc;
  }
  return y;
}

DenseMatrix& DenseMatrix::operator+=(const DenseMatrix& other) {
  require_same_shape(*this, other, "operator+");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += other.data_[k];
  return *this;
}

DenseMatrix& DenseMatrix::operator-=(const DenseMatrix& other) {
  require_same_shape(*this, other, "operator-");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= other.data_[k];
  return *this;
}

DenseMatrix& DenseMatrix::operator*=(double s) {
  for (double& v : data_) v *= s;
  return *this;
}

double DenseMatrix::max_abs() const {
  double m = 0.0;
  for (double v : data_) m = std::max(m, std::abs(v));
  return m;
}

double DenseMatrix::frobenius_norm() const {
  double s = 0.0;
  for (double v : data_) s += v * v;
  return std::sqrt(s);
}

DenseMatrix operator+(DenseMatrix a, const DenseMatrix& b) { return a += b; }
DenseMatrix operator-(DenseMatrix a, const DenseMatrix& b) { return a -= b; }
DenseMatrix operator*(DenseMatrix a, double s) { return a *= s; }
DenseMatrix operator*(double s, DenseMatrix a) { return a *= s; }

DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.rows()) throw DimensionError("matrix product: inner dimensions differ");
  DenseMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

DenseMatrix kron(const DenseMatrix& a, const DenseMatrix& b) {
  DenseMatrix k(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      for (std::size_t p = 0; p < b.rows(); ++p)
        for (std::size_t q = 0; q < b.cols(); ++q)
          k(i * b.rows() + p, j * b.cols() + q) = a(i, j) * b(p, q);
  return k;
}

DenseMatrix blockdiag_vec(std::span<const std::vector<double>> blocks) {
  const std::size_t n = blocks.size();
  if (n == 0) return {};
  const std::size_t d = blocks.front().size();
  for (const auto& b : blocks)
    if (b.size() != d) throw DimensionError("blockdiag_vec: vectors of unequal length");
  DenseMatrix m(n * d, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t a = 0; a < d; ++a) m(i * d + a, i) = blocks[i][a];
  return m;
}

DenseMatrix blockdiag_mat(std::span<const DenseMatrix> blocks) {
  const std::size_t n = blocks.size();
  if (n == 0) return {};
  const std::size_t d = blocks.front().rows();
  for (const auto& b : blocks)
    if (b.rows() != d || b.cols() != d)
      throw DimensionError("blockdiag_mat: blocks must be square and of equal size");
  DenseMatrix m(n * d, n * d);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t r = 0; r < d; ++r)
      for (std::size_t c = 0; c < d; ++c) m(i * d + r, i * d + c) = blocks[i](r, c);
  return m;
}

DenseMatrix hadamard(const DenseMatrix& a, const DenseMatrix& b) {
  require_same_shape(a, b, "hadamard");
  DenseMatrix h(a.rows(), a.cols());
  for (std::size_t k = 0; k < h.data().size(); ++k) h.data()[k] = a.data()[k] * b.data()[k];
  return h;
}

DenseMatrix symmetric_part(const DenseMatrix& a) {
  if (!a.square()) throw DimensionError("symmetric_part: matrix not square");
  DenseMatrix s(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) s(i, j) = 0.5 * (a(i, j) + a(j, i));
  return s;
}

double asymmetry(const DenseMatrix& a) {
  if (!a.square()) throw DimensionError("asymmetry: matrix not square");
  double m = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = i + 1; j < a.cols(); ++j) m = std::max(m, std::abs(a(i, j) - a(j, i)));
  return m;
}

void jacobi_eigen_inplace(std::size_t n, double* a, double* values, double* vectors) {
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) vectors[i * n + j] = (i == j) ? 1.0 : 0.0;
  auto at = [n, a](std::size_t i, std::size_t j) -> double& { return a[i * n + j]; };

  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    double diag = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      diag += at(i, i) * at(i, i);
      for (std::size_t j = i + 1; j < n; ++j) off += at(i, j) * at(i, j);
    }
    if (off <= 1e-34 * diag || off == 0.0) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = at(p, q);
        if (apq == 0.0) continue;
        const double theta = (at(q, q) - at(p, p)) / (2.0 * apq);
        const double t = std::copysign(1.0, theta) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = at(k, p);
          const double akq = at(k, q);
          at(k, p) = c * akp - s * akq;
          at(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = at(p, k);
          const double aqk = at(q, k);
          at(p, k) = c * apk - s * aqk;
          at(q, k) = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = vectors[k * n + p];
          const double vkq = vectors[k * n + q];
          vectors[k * n + p] = c * vkp - s * vkq;
          vectors[k * n + q] = s * vkp + c * vkq;
        }
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) values[i] = at(i, i);
}

SymmetricEigen symmetric_eigen(const DenseMatrix& a) {
  if (!a.square()) throw DimensionError("symmetric_eigen: matrix not square");
  const std::size_t n = a.rows();
  std::vector<double> work(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) work[i * n + j] = (j >= i) ? a(i, j) : a(j, i);
  std::vector<double> vals(n);
  DenseMatrix vecs(n, n);
  jacobi_eigen_inplace(n, work.data(), vals.data(), vecs.data().data());

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return vals[x] < vals[y]; });
  SymmetricEigen out{std::vector<double>(n), DenseMatrix(n, n)};
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = vals[order[k]];
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = vecs(i, order[k]);
  }
  return out;
}

std::vector<double> singular_values(const DenseMatrix& a) {
  // One-sided Jacobi on the columns of a (or of a^T when wide).
  DenseMatrix u = a.rows() >= a.cols() ? a : a.transposed();
  const std::size_t m = u.rows();
  const std::size_t n = u.cols();
  for (int sweep = 0; sweep < 100; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        double alpha = 0.0, beta = 0.0, gamma = 0.0;
        for (std::size_t k = 0; k < m; ++k) {
          alpha += u(k, p) * u(k, p);
          beta += u(k, q) * u(k, q);
          gamma += u(k, p) * u(k, q);
        }
        if (gamma == 0.0 || std::abs(gamma) <= 1e-15 * std::sqrt(alpha * beta)) continue;
        rotated = true;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = std::copysign(1.0, zeta) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (std::size_t k = 0; k < m; ++k) {
          const double ukp = u(k, p);
          const double ukq = u(k, q);
          u(k, p) = c * ukp - s * ukq;
          u(k, q) = s * ukp + c * ukq;
        }
      }
    }
    if (!rotated) break;
  }
  std::vector<double> sv(n);
  for (std::size_t j = 0; j < n; ++j) {
    double s = 0.0;
    for (std::size_t k = 0; k < m; ++k) s += u(k, j) * u(k, j);
    sv[j] = std::sqrt(s);
  }
  std::sort(sv.begin(), sv.end(), std::greater<>());
  return sv;
}

std::vector<double> solve(DenseMatrix a, std::vector<double> b) {
  if (!a.square() || a.rows() != b.size()) throw DimensionError("solve: shape mismatch");
  const std::size_t n = a.rows();
  const double scale = std::max(a.max_abs(), 1e-300);
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(a(i, k)) > std::abs(a(piv, k))) piv = i;
    if (!(std::abs(a(piv, k)) > 1e-14 * scale)) throw InternalError("solve: singular matrix");
    if (piv != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(piv, j));
      std::swap(b[k], b[piv]);
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      const double f = a(i, k) / a(k, k);
      for (std::size_t j = k + 1; j < n; ++j) a(i, j) -= f * a(k, j);
      b[i] -= f * b[k];
    }
  }
  for (std::size_t i = n; i-- > 0;) {
    double acc = b[i];
    for (std::size_t j = i + 1; j < n; ++j) acc -= a(i, j) * b[j];
    b[i] = acc / a(i, i);
  }
  return b;
}

DenseMatrix cholesky_lower(const DenseMatrix& a) {
  if (!a.square()) throw DimensionError("cholesky_lower: matrix not square");
  const std::size_t n = a.rows();
  DenseMatrix l(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    double d = a(j, j);
    for (std::size_t k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
    if (!(d > 0.0)) throw InternalError("cholesky_lower: matrix not positive definite");
    l(j, j) = std::sqrt(d);
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = a(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      l(i, j) = s / l(j, j);
    }
  }
  return l;
}

DenseMatrix lower_triangular_inverse(const DenseMatrix& l) {
  const std::size_t n = l.rows();
  DenseMatrix inv(n, n);
  for (std::size_t c = 0; c < n; ++c) {
    for (std::size_t i = c; i < n; ++i) {
      double s = (i == c) ? 1.0 : 0.0;
      for (std::size_t k = c; k < i; ++k) s -= l(i, k) * inv(k, c);
      inv(i, c) = s / l(i, i);
    }
  }
  return inv;
}

}  // namespace msdarcy
