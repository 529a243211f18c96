#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "errors.hpp"

namespace c1fem {

/// Row-major dense matrix.
class DenseMatrix {
public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static DenseMatrix identity(std::size_t n) {
    DenseMatrix I(n, n);
    for (std::size_t i = 0; i < n; ++i)
      I(i, i) = 1.0;
    return I;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }
  std::span<const double> data() const noexcept { return data_; }

  double norm_inf() const {
    double m = 0.0;
    for (std::size_t i = 0; i < rows_; ++i) {
      double s = 0.0;
      for (double v : row(i))
        s += std::abs(v);
      m = std::max(m, s);
    }
    return m;
  }

  double norm_1() const {
    std::vector<double> s(cols_, 0.0);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j)
        s[j] += std::abs((*this)(i, j));
    return s.empty() ? 0.0 : *std::max_element(s.begin(), s.end());
  }

  double max_abs() const {
    double m = 0.0;
    for (double v : data_)
      m = std::max(m, std::abs(v));
    return m;
  }

  friend DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.cols_ != b.rows_)
      throw InvalidArgument("DenseMatrix product: inner dimensions differ");
    DenseMatrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const double aik = a(i, k);
        if (aik == 0.0)
          continue;
        for (std::size_t j = 0; j < b.cols_; ++j)
          c(i, j) += aik * b(k, j);
      }
    return c;
  }

  friend DenseMatrix operator-(DenseMatrix a, const DenseMatrix& b) {
    for (std::size_t i = 0; i < a.data_.size(); ++i)
      a.data_[i] -= b.data_[i];
    return a;
  }

  DenseMatrix transposed() const {
    DenseMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j)
        t(j, i) = (*this)(i, j);
    return t;
  }

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// LU factorization with partial pivoting, PA = LU.
class LuFactorization {
public:
  explicit LuFactorization(DenseMatrix a) : lu_(std::move(a)) {
    if (lu_.rows() != lu_.cols())
      throw InvalidArgument("LuFactorization: matrix must be square");
    const std::size_t n = lu_.rows();
    perm_.resize(n);
    std::iota(perm_.begin(), perm_.end(), std::size_t{0});
    for (std::size_t k = 0; k < n; ++k) {
      std::size_t p = k;
      double best = std::abs(lu_(k, k));
      for (std::size_t i = k + 1; i < n; ++i)
        if (std::abs(lu_(i, k)) > best) {
          best = std::abs(lu_(i, k));
          p = i;
        }
      if (best == 0.0)
        throw SingularMatrixError("LuFactorization: zero pivot in column " + std::to_string(k));
      if (p != k) {
        std::swap_ranges(lu_.row(k).begin(), lu_.row(k).end(), lu_.row(p).begin());
        std::swap(perm_[k], perm_[p]);
      }
      const double piv = lu_(k, k);
      for (std::size_t i = k + 1; i < n; ++i) {
        const double l = lu_(i, k) / piv;
        lu_(i, k) = l;
        if (l == 0.0)
          continue;
        for (std::size_t j = k + 1; j < n; ++j)
          lu_(i, j) -= l * lu_(k, j);
      }
    }
  }

  std::size_t size() const noexcept { return lu_.rows(); }

  /// Solves A x = b in place.
  void solve_in_place(std::span<double> b) const {
    const std::size_t n = size();
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i)
      y[i] = b[perm_[i]];
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < i; ++j)
        y[i] -= lu_(i, j) * y[j];
    for (std::size_t i = n; i-- > 0;) {
      for (std::size_t j = i + 1; j < n; ++j)
        y[i] -= lu_(i, j) * y[j];
      y[i] /= lu_(i, i);
    }
    std::copy(y.begin(), y.end(), b.begin());
  }

  /// Solves A^T x = b in place.
  void solve_transpose_in_place(std::span<double> b) const {
    const std::size_t n = size();
    std::vector<double> z(b.begin(), b.end());
    // U^T w = b
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < i; ++j)
        z[i] -= lu_(j, i) * z[j];
      z[i] /= lu_(i, i);
    }
    // L^T v = w
    for (std::size_t i = n; i-- > 0;)
      for (std::size_t j = i + 1; j < n; ++j)
        z[i] -= lu_(j, i) * z[j];
    for (std::size_t i = 0; i < n; ++i)
      b[perm_[i]] = z[i];
  }

  DenseMatrix solve(const DenseMatrix& B) const {
    if (B.rows() != size())
      throw InvalidArgument("LuFactorization::solve: right-hand side has wrong row count");
    DenseMatrix X(B.rows(), B.cols());
    std::vector<double> col(size());
    for (std::size_t j = 0; j < B.cols(); ++j) {
      for (std::size_t i = 0; i < size(); ++i)
        col[i] = B(i, j);
      solve_in_place(col);
      for (std::size_t i = 0; i < size(); ++i)
        X(i, j) = col[i];
    }
    return X;
  }

  /// Ratio of the largest to the smallest |U_ii|; a cheap lower-quality
  /// indicator reported alongside the 1-norm estimate.
  double pivot_ratio() const {
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (std::size_t i = 0; i < size(); ++i) {
      lo = std::min(lo, std::abs(lu_(i, i)));
      hi = std::max(hi, std::abs(lu_(i, i)));
    }
    return hi / lo;
  }

  /// Estimate of ||A^{-1}||_1 by Hager's power iteration on A^{-1}.
  double inverse_norm1_estimate() const {
    const std::size_t n = size();
    std::vector<double> x(n, 1.0 / static_cast<double>(n));
    double est = 0.0;
    for (int it = 0; it < 5; ++it) {
      std::vector<double> y = x;
      solve_in_place(y);
      double ny = 0.0;
      for (double v : y)
        ny += std::abs(v);
      if (it > 0 && ny <= est)
        break;
      est = ny;
      std::vector<double> z(n);
      for (std::size_t i = 0; i < n; ++i)
        z[i] = y[i] >= 0.0 ? 1.0 : -1.0;
      solve_transpose_in_place(z);
      std::size_t jmax = 0;
      for (std::size_t i = 1; i < n; ++i)
        if (std::abs(z[i]) > std::abs(z[jmax]))
          jmax = i;
      double ztx = 0.0;
      for (std::size_t i = 0; i < n; ++i)
        ztx += z[i] * x[i];
      if (std::abs(z[jmax]) <= ztx)
        break;
      std::fill(x.begin(), x.end(), 0.0);
      x[jmax] = 1.0;
    }
    // Higham's alternating-sign safeguard
    std::vector<double> alt(n);
    for (std::size_t i = 0; i < n; ++i)
      alt[i] = ((i % 2 == 0) ? 1.0 : -1.0) * (1.0 + static_cast<double>(i) / std::max<double>(1.0, n - 1.0));
    solve_in_place(alt);
    double na = 0.0;
    for (double v : alt)
      na += std::abs(v);
    return std::max(est, 2.0 * na / (3.0 * static_cast<double>(n)));
  }

private:
  DenseMatrix lu_;
  std::vector<std::size_t> perm_;
};

inline DenseMatrix lu_solve(const DenseMatrix& A, const DenseMatrix& B) {
  return LuFactorization(A).solve(B);
}

/// Estimate of the 1-norm condition number ||A||_1 ||A^{-1}||_1; +infinity if
/// the factorization hits an exact zero pivot.
inline double condition_estimate(const DenseMatrix& A) {
  try {
    const LuFactorization lu(A);
    const double inv = lu.inverse_norm1_estimate();
    if (!std::isfinite(inv))
      return std::numeric_limits<double>::infinity();
    return A.norm_1() * inv;
  } catch (const SingularMatrixError&) {
    return std::numeric_limits<double>::infinity();
  }
}

/// Dense row-major matrix in extended precision.
struct WideMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<long double> a;

  WideMatrix() = default;
  WideMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c, 0.0L) {}

  long double& operator()(std::size_t i, std::size_t j) { return a[i * cols + j]; }
  long double operator()(std::size_t i, std::size_t j) const { return a[i * cols + j]; }

  std::vector<long double> column(std::size_t j) const {
    std::vector<long double> c(rows);
    for (std::size_t i = 0; i < rows; ++i)
      c[i] = (*this)(i, j);
    return c;
  }

  DenseMatrix to_dense() const {
    DenseMatrix d(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < cols; ++j)
        d(i, j) = static_cast<double>((*this)(i, j));
    return d;
  }
};

inline WideMatrix operator*(const WideMatrix& A, const WideMatrix& B) {
  if (A.cols != B.rows)
    throw InvalidArgument("WideMatrix product: inner dimensions differ");
  WideMatrix C(A.rows, B.cols);
  for (std::size_t i = 0; i < A.rows; ++i)
    for (std::size_t l = 0; l < A.cols; ++l) {
      const long double v = A(i, l);
      if (v == 0.0L)
        continue;
      for (std::size_t j = 0; j < B.cols; ++j)
        C(i, j) += v * B(l, j);
    }
  return C;
}

/// Inverse by Gauss-Jordan elimination with partial pivoting.
inline WideMatrix wide_inverse(WideMatrix A) {
  const std::size_t n = A.rows;
  WideMatrix X(n, n);
  for (std::size_t i = 0; i < n; ++i)
    X(i, i) = 1.0L;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(A(i, k)) > std::abs(A(p, k)))
        p = i;
    if (A(p, k) == 0.0L)
      throw SingularMatrixError("wide_inverse: zero pivot in column " + std::to_string(k));
    if (p != k)
      for (std::size_t j = 0; j < n; ++j) {
        std::swap(A(k, j), A(p, j));
        std::swap(X(k, j), X(p, j));
      }
    const long double piv = A(k, k);
    for (std::size_t j = 0; j < n; ++j) {
      A(k, j) /= piv;
      X(k, j) /= piv;
    }
    for (std::size_t i = 0; i < n; ++i) {
      const long double l = A(i, k);
      if (i == k || l == 0.0L)
        continue;
      for (std::size_t j = 0; j < n; ++j) {
        A(i, j) -= l * A(k, j);
        X(i, j) -= l * X(k, j);
      }
    }
  }
  return X;
}

// ---------------------------------------------------------------------------
// Sparse matrices and the SPD solver
// ---------------------------------------------------------------------------

template <class T>
struct BasicTriplet {
  int row;
  int col;
  T value;
};

/// Compressed sparse row matrix with sorted, unique column indices per row.
template <class T>
struct BasicCsrMatrix {
  using value_type = T;

  int rows = 0;
  int cols = 0;
  std::vector<int> row_ptr{0};
  std::vector<int> col_idx;
  std::vector<T> values;

  std::size_t nnz() const noexcept { return values.size(); }

  /// Builds a matrix from unordered triplets; duplicates are summed.
  static BasicCsrMatrix from_triplets(int rows, int cols, std::vector<BasicTriplet<T>> trips) {
    std::sort(trips.begin(), trips.end(), [](const BasicTriplet<T>& a, const BasicTriplet<T>& b) {
      return std::tie(a.row, a.col) < std::tie(b.row, b.col);
    });
    BasicCsrMatrix m;
    m.rows = rows;
    m.cols = cols;
    m.row_ptr.assign(static_cast<std::size_t>(rows) + 1, 0);
    for (std::size_t t = 0; t < trips.size(); ++t) {
      const auto& tr = trips[t];
      if (tr.row < 0 || tr.row >= rows || tr.col < 0 || tr.col >= cols)
        throw InvalidArgument("CsrMatrix::from_triplets: index out of range");
      if (!m.col_idx.empty() && t > 0 && trips[t - 1].row == tr.row && trips[t - 1].col == tr.col) {
        m.values.back() += tr.value;
        continue;
      }
      m.col_idx.push_back(tr.col);
      m.values.push_back(tr.value);
      ++m.row_ptr[static_cast<std::size_t>(tr.row) + 1];
    }
    for (int i = 0; i < rows; ++i)
      m.row_ptr[i + 1] += m.row_ptr[i];
    return m;
  }

  T at(int i, int j) const {
    const auto b = col_idx.begin() + row_ptr[i], e = col_idx.begin() + row_ptr[i + 1];
    const auto it = std::lower_bound(b, e, j);
    return (it != e && *it == j) ? values[static_cast<std::size_t>(it - col_idx.begin())] : T(0);
  }

  template <class U>
  void multiply(std::span<const U> x, std::span<U> y) const {
    for (int i = 0; i < rows; ++i) {
      U s = 0;
      for (int p = row_ptr[i]; p < row_ptr[i + 1]; ++p)
        s += values[p] * x[col_idx[p]];
      y[i] = s;
    }
  }

  std::vector<T> operator*(std::span<const T> x) const {
    std::vector<T> y(static_cast<std::size_t>(rows));
    multiply<T>(x, y);
    return y;
  }

  DenseMatrix to_dense() const {
    DenseMatrix d(static_cast<std::size_t>(rows), static_cast<std::size_t>(cols));
    for (int i = 0; i < rows; ++i)
      for (int p = row_ptr[i]; p < row_ptr[i + 1]; ++p)
        d(i, col_idx[p]) = static_cast<double>(values[p]);
    return d;
  }

  /// Copy with entries rounded to another scalar type.
  template <class U>
  BasicCsrMatrix<U> cast() const {
    BasicCsrMatrix<U> m;
    m.rows = rows;
    m.cols = cols;
    m.row_ptr = row_ptr;
    m.col_idx = col_idx;
    m.values.assign(values.begin(), values.end());
    return m;
  }

  /// Largest |A_ij - A_ji| over stored entries.
  double asymmetry() const {
    double m = 0.0;
    for (int i = 0; i < rows; ++i)
      for (int p = row_ptr[i]; p < row_ptr[i + 1]; ++p)
        m = std::max(m, static_cast<double>(std::abs(values[p] - at(col_idx[p], i))));
    return m;
  }

  bool structurally_symmetric() const {
    for (int i = 0; i < rows; ++i)
      for (int p = row_ptr[i]; p < row_ptr[i + 1]; ++p) {
        const int j = col_idx[p];
        const auto b = col_idx.begin() + row_ptr[j], e = col_idx.begin() + row_ptr[j + 1];
        if (!std::binary_search(b, e, i))
          return false;
      }
    return true;
  }
};

using Triplet = BasicTriplet<double>;
using CsrMatrix = BasicCsrMatrix<double>;
/// Extended-precision sparse matrix; the assembled global systems use it.
using WideCsrMatrix = BasicCsrMatrix<long double>;

template <class T>
T norm2(std::span<const T> v) {
  T s = 0;
  for (T x : v)
    s += x * x;
  return std::sqrt(s);
}

inline double norm2(const std::vector<double>& v) { return norm2(std::span<const double>(v)); }

/// Envelope (skyline) Cholesky factor of an SPD matrix in its given ordering.
/// Row i stores L(i, first[i] .. i) contiguously.
template <class T>
class BasicSkylineCholesky {
public:
  explicit BasicSkylineCholesky(const BasicCsrMatrix<T>& a) : n_(a.rows) {
    if (a.rows != a.cols)
      throw InvalidArgument("SkylineCholesky: matrix must be square");
    first_.resize(static_cast<std::size_t>(n_));
    offset_.resize(static_cast<std::size_t>(n_) + 1, 0);
    for (int i = 0; i < n_; ++i) {
      int f = i;
      for (int p = a.row_ptr[i]; p < a.row_ptr[i + 1]; ++p)
        f = std::min(f, a.col_idx[p]);
      first_[i] = f;
      offset_[i + 1] = offset_[i] + static_cast<std::size_t>(i - f + 1);
    }
    env_.assign(offset_.back(), T(0));
    for (int i = 0; i < n_; ++i)
      for (int p = a.row_ptr[i]; p < a.row_ptr[i + 1]; ++p) {
        const int j = a.col_idx[p];
        if (j <= i)
          env_[offset_[i] + static_cast<std::size_t>(j - first_[i])] = a.values[p];
      }
    for (int i = 0; i < n_; ++i) {
      T* li = &env_[offset_[i]];
      const int fi = first_[i];
      for (int j = fi; j < i; ++j) {
        const T* lj = &env_[offset_[j]];
        const int fj = first_[j];
        const int k0 = std::max(fi, fj);
        T s = li[j - fi];
        for (int k = k0; k < j; ++k)
          s -= li[k - fi] * lj[k - fj];
        li[j - fi] = s / lj[j - fj];
      }
      T d = li[i - fi];
      for (int k = fi; k < i; ++k)
        d -= li[k - fi] * li[k - fi];
      if (!(d > 0) || !std::isfinite(d))
        throw SolverError("SkylineCholesky: non-positive pivot " + std::to_string(static_cast<double>(d)) +
                          " at row " + std::to_string(i) + " (matrix not SPD)");
      li[i - fi] = std::sqrt(d);
    }
  }

  int size() const noexcept { return n_; }
  std::size_t envelope_size() const noexcept { return env_.size(); }

  void solve_in_place(std::span<T> b) const {
    for (int i = 0; i < n_; ++i) {
      const T* li = &env_[offset_[i]];
      const int fi = first_[i];
      T s = b[i];
      for (int k = fi; k < i; ++k)
        s -= li[k - fi] * b[k];
      b[i] = s / li[i - fi];
    }
    for (int i = n_; i-- > 0;) {
      const T* li = &env_[offset_[i]];
      const int fi = first_[i];
      b[i] /= li[i - fi];
      const T bi = b[i];
      for (int k = fi; k < i; ++k)
        b[k] -= li[k - fi] * bi;
    }
  }

private:
  int n_;
  std::vector<int> first_;
  std::vector<std::size_t> offset_;
  std::vector<T> env_;
};

using SkylineCholesky = BasicSkylineCholesky<double>;

enum class SolverKind { Cholesky, Pcg };

inline std::string to_string(SolverKind s) { return s == SolverKind::Cholesky ? "cholesky" : "pcg"; }

struct SolveResult {
  /// Solution rounded to double.
  std::vector<double> x;
  /// ||A x - b||_2 / ||b||_2 (absolute norm when b = 0), evaluated in the
  /// matrix's scalar type before rounding x.
  double residual = 0.0;
  int iterations = 0;
};

namespace detail {

template <class T>
double relative_residual(const BasicCsrMatrix<T>& A, std::span<const T> x, std::span<const T> b) {
  std::vector<T> r = A * x;
  for (std::size_t i = 0; i < r.size(); ++i)
    r[i] -= b[i];
  const T nb = norm2<T>(b);
  return static_cast<double>(nb > 0 ? norm2<T>(r) / nb : norm2<T>(r));
}

inline double relative_residual(const CsrMatrix& A, const std::vector<double>& x, const std::vector<double>& b) {
  return relative_residual<double>(A, x, b);
}

template <class T>
SolveResult finish(const BasicCsrMatrix<T>& A, const std::vector<T>& x, std::span<const T> b, int iterations) {
  SolveResult res;
  res.x.assign(x.begin(), x.end());
  res.residual = relative_residual<T>(A, x, b);
  res.iterations = iterations;
  return res;
}

template <class T>
SolveResult pcg(const BasicCsrMatrix<T>& A, std::span<const T> b, double tol, int max_iter) {
  const auto n = static_cast<std::size_t>(A.rows);
  std::vector<T> x(n, T(0)), inv_diag(n);
  for (int i = 0; i < A.rows; ++i) {
    const T d = A.at(i, i);
    if (!(d > 0))
      throw SolverError("pcg: non-positive diagonal entry at row " + std::to_string(i));
    inv_diag[i] = 1 / d;
  }
  const T nb = norm2<T>(b);
  if (nb == 0)
    return finish<T>(A, x, b, 0);
  std::vector<T> r(b.begin(), b.end()), z(n), p(n), q(n);
  for (std::size_t i = 0; i < n; ++i)
    z[i] = inv_diag[i] * r[i];
  p = z;
  T rz = std::inner_product(r.begin(), r.end(), z.begin(), T(0));
  int iterations = 0;
  for (int it = 1; it <= max_iter; ++it) {
    A.template multiply<T>(p, q);
    const T pq = std::inner_product(p.begin(), p.end(), q.begin(), T(0));
    if (!(pq > 0))
      throw SolverError("pcg: non-positive curvature (matrix not SPD)");
    const T alpha = rz / pq;
    for (std::size_t i = 0; i < n; ++i) {
      x[i] += alpha * p[i];
      r[i] -= alpha * q[i];
    }
    iterations = it;
    if (norm2<T>(r) <= tol * nb)
      break;
    for (std::size_t i = 0; i < n; ++i)
      z[i] = inv_diag[i] * r[i];
    const T rz_new = std::inner_product(r.begin(), r.end(), z.begin(), T(0));
    const T beta = rz_new / rz;
    rz = rz_new;
    for (std::size_t i = 0; i < n; ++i)
      p[i] = z[i] + beta * p[i];
  }
  SolveResult res = finish<T>(A, x, b, iterations);
  if (!(res.residual <= tol * 10.0))
    throw SolverError("pcg: no convergence after " + std::to_string(res.iterations) +
                      " iterations, relative residual " + std::to_string(res.residual));
  return res;
}

} // namespace detail

/// Solves A x = b for symmetric positive definite A in the scalar type of A.
/// The default direct path factors in the given (natural) ordering; PCG uses
/// a Jacobi preconditioner, tolerance 1e-12 and at most 50 dim iterations.
template <class T>
SolveResult spd_solve(const BasicCsrMatrix<T>& A, std::span<const T> b, SolverKind kind = SolverKind::Cholesky) {
  if (A.rows != A.cols || b.size() != static_cast<std::size_t>(A.rows))
    throw InvalidArgument("spd_solve: dimension mismatch");
  if (A.rows == 0)
    return {};
  if (kind == SolverKind::Pcg)
    return detail::pcg<T>(A, b, 1e-12, 50 * A.rows);
  const BasicSkylineCholesky<T> chol(A);
  std::vector<T> x(b.begin(), b.end());
  chol.solve_in_place(x);
  return detail::finish<T>(A, x, b, 0);
}

inline SolveResult spd_solve(const CsrMatrix& A, const std::vector<double>& b,
                             SolverKind kind = SolverKind::Cholesky) {
  return spd_solve<double>(A, b, kind);
}

inline SolveResult spd_solve(const WideCsrMatrix& A, const std::vector<long double>& b,
                             SolverKind kind = SolverKind::Cholesky) {
  return spd_solve<long double>(A, b, kind);
}

/// 2-norm condition estimate of an SPD matrix: power iteration for the largest
/// eigenvalue, inverse iteration through the Cholesky factor for the smallest.
template <class T>
double spd_condition_estimate(const BasicCsrMatrix<T>& A, int iterations = 60) {
  const auto n = static_cast<std::size_t>(A.rows);
  if (n == 0)
    return 1.0;
  const BasicSkylineCholesky<T> chol(A);
  auto iterate = [&](bool inverse) {
    std::vector<T> v(n), w(n);
    for (std::size_t i = 0; i < n; ++i)
      v[i] = 1 + T(0.1) * std::sin(static_cast<T>(i) + T(0.5));
    T lambda = 0;
    for (int it = 0; it < iterations; ++it) {
      const T nv = norm2<T>(v);
      for (auto& x : v)
        x /= nv;
      if (inverse) {
        w = v;
        chol.solve_in_place(w);
      } else {
        A.template multiply<T>(v, w);
      }
      lambda = std::inner_product(v.begin(), v.end(), w.begin(), T(0));
      v.swap(w);
    }
    return lambda;
  };
  const T lmax = iterate(false);
  const T inv_lmin = iterate(true);
  return static_cast<double>(lmax * inv_lmin);
}

} // namespace c1fem
