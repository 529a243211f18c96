#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "errors.hpp"

namespace c1fem {

/// Largest polynomial degree per variable that Poly2D accepts.
inline constexpr int kMaxPolyDegree = 12;
/// Largest derivative order per variable accepted by Poly2D::eval.
inline constexpr int kMaxDerivative = 4;

/// Bivariate polynomial stored as a dense grid of monomial coefficients about
/// an expansion point (x0, y0) of the reference square: entry (i, j) multiplies
/// (x - x0)^i (y - y0)^j. The default expansion point is the origin; element
/// shape functions are expanded about the cell centre, which keeps the
/// coefficients of high-degree duals small.
class Poly2D {
public:
  Poly2D() : Poly2D(0, 0) {}

  Poly2D(int nx, int ny, double x0 = 0.0, double y0 = 0.0) : nx_(nx), ny_(ny), x0_(x0), y0_(y0) {
    if (nx < 0 || ny < 0 || nx > kMaxPolyDegree || ny > kMaxPolyDegree)
      throw InvalidArgument("Poly2D: exponent bounds must lie in [0, " +
                            std::to_string(kMaxPolyDegree) + "]");
    coeffs_.assign(static_cast<std::size_t>((nx + 1) * (ny + 1)), 0.0);
  }

  static Poly2D monomial(int i, int j, double c = 1.0) {
    Poly2D p(i, j);
    p.coeff(i, j) = c;
    return p;
  }

  int nx() const noexcept { return nx_; }
  int ny() const noexcept { return ny_; }
  double x0() const noexcept { return x0_; }
  double y0() const noexcept { return y0_; }

  double& coeff(int i, int j) { return coeffs_[index(i, j)]; }
  double coeff(int i, int j) const {
    if (i < 0 || j < 0 || i > nx_ || j > ny_)
      return 0.0;
    return coeffs_[index(i, j)];
  }
  std::span<const double> coefficients() const noexcept { return coeffs_; }

  /// d^dx/dx^dx d^dy/dy^dy p at (x, y), from the coefficients with exact
  /// falling-factorial factors. Accumulates in extended precision.
  double eval(double x, double y, int dx = 0, int dy = 0) const {
    if (dx < 0 || dy < 0 || dx > kMaxDerivative || dy > kMaxDerivative)
      throw InvalidArgument("Poly2D::eval: derivative order out of range");
    if (dx > nx_ || dy > ny_)
      return 0.0;
    const long double u = static_cast<long double>(x) - x0_;
    const long double v = static_cast<long double>(y) - y0_;
    std::array<long double, kMaxPolyDegree + 1> vpow{};
    long double vp = 1.0L;
    for (int j = dy; j <= ny_; ++j) {
      vpow[j] = falling(j, dy) * vp;
      vp *= v;
    }
    long double result = 0.0L;
    for (int i = nx_; i >= dx; --i) {
      long double row = 0.0L;
      for (int j = dy; j <= ny_; ++j)
        row += coeffs_[index(i, j)] * vpow[j];
      result = result * u + falling(i, dx) * row;
    }
    return static_cast<double>(result);
  }

  double operator()(double x, double y) const { return eval(x, y); }

  /// The same polynomial re-expanded about (x0, y0).
  Poly2D about(double x0, double y0) const {
    Poly2D out(nx_, ny_, x0, y0);
    const long double dx = static_cast<long double>(x0) - x0_;
    const long double dy = static_cast<long double>(y0) - y0_;
    // (x - a)^i = sum_m C(i, m) (x - b)^m (b - a)^(i - m)
    std::vector<long double> acc(coeffs_.size(), 0.0L);
    for (int i = 0; i <= nx_; ++i)
      for (int j = 0; j <= ny_; ++j) {
        const long double c = coeff(i, j);
        if (c == 0.0L)
          continue;
        for (int m = 0; m <= i; ++m)
          for (int n = 0; n <= j; ++n)
            acc[index(m, n)] += c * binom(i, m) * ipow(dx, i - m) * binom(j, n) * ipow(dy, j - n);
      }
    for (std::size_t t = 0; t < acc.size(); ++t)
      out.coeffs_[t] = static_cast<double>(acc[t]);
    return out;
  }

  /// True if every coefficient with i > k or j > k is within tol of zero.
  /// Independent of the expansion point.
  bool in_q(int k, double tol = 0.0) const {
    for (int i = 0; i <= nx_; ++i)
      for (int j = 0; j <= ny_; ++j)
        if ((i > k || j > k) && std::abs(coeff(i, j)) > tol)
          return false;
    return true;
  }

  /// True if every coefficient with i + j > k is within tol of zero.
  bool in_p(int k, double tol = 0.0) const {
    for (int i = 0; i <= nx_; ++i)
      for (int j = 0; j <= ny_; ++j)
        if (i + j > k && std::abs(coeff(i, j)) > tol)
          return false;
    return true;
  }

  Poly2D& operator+=(const Poly2D& other) {
    if (other.x0_ != x0_ || other.y0_ != y0_)
      return *this += other.about(x0_, y0_);
    if (other.nx_ > nx_ || other.ny_ > ny_)
      *this = resized(std::max(nx_, other.nx_), std::max(ny_, other.ny_));
    for (int i = 0; i <= other.nx_; ++i)
      for (int j = 0; j <= other.ny_; ++j)
        coeff(i, j) += other.coeff(i, j);
    return *this;
  }

  Poly2D& operator*=(double s) {
    for (auto& c : coeffs_)
      c *= s;
    return *this;
  }

  friend Poly2D operator+(Poly2D a, const Poly2D& b) { return a += b; }
  friend Poly2D operator*(double s, Poly2D p) { return p *= s; }

  /// Copy with a different coefficient grid; dropped entries must be zero.
  Poly2D resized(int nx, int ny) const {
    Poly2D out(nx, ny, x0_, y0_);
    for (int i = 0; i <= std::min(nx, nx_); ++i)
      for (int j = 0; j <= std::min(ny, ny_); ++j)
        out.coeff(i, j) = coeff(i, j);
    return out;
  }

private:
  std::size_t index(int i, int j) const noexcept {
    return static_cast<std::size_t>(i * (ny_ + 1) + j);
  }

  static long double falling(int n, int d) noexcept {
    long double f = 1.0L;
    for (int t = 0; t < d; ++t)
      f *= n - t;
    return f;
  }

  static long double binom(int n, int k) noexcept {
    long double r = 1.0L;
    for (int t = 1; t <= k; ++t)
      r = r * (n - k + t) / t;
    return r;
  }

  static long double ipow(long double v, int e) noexcept {
    long double r = 1.0L;
    for (int t = 0; t < e; ++t)
      r *= v;
    return r;
  }

  int nx_;
  int ny_;
  double x0_;
  double y0_;
  std::vector<double> coeffs_;
};

enum class SpaceLabel { Pk, Qk, Serendipity };

inline std::string to_string(SpaceLabel s) {
  switch (s) {
  case SpaceLabel::Pk: return "Pk";
  case SpaceLabel::Qk: return "Qk";
  case SpaceLabel::Serendipity: return "Vk-serendipity";
  }
  return "?";
}

/// Ordered list of polynomials spanning a space.
struct BasisList {
  std::vector<Poly2D> functions;
  SpaceLabel label = SpaceLabel::Qk;
  int degree = 0;

  std::size_t size() const noexcept { return functions.size(); }
  const Poly2D& operator[](std::size_t i) const { return functions[i]; }
};

inline int dim_p(int k) { return (k + 1) * (k + 2) / 2; }
inline int dim_q(int k) { return (k + 1) * (k + 1); }

/// Monomials of P_k in graded lexicographic order (x^d, x^{d-1}y, ..., y^d for
/// d = 0..k) or of Q_k in row-major (i, j) order.
inline BasisList monomial_basis(SpaceLabel space, int k) {
  if (k < 0 || k > kMaxPolyDegree)
    throw InvalidArgument("monomial_basis: degree out of range");
  BasisList out;
  out.label = space;
  out.degree = k;
  if (space == SpaceLabel::Pk) {
    for (int d = 0; d <= k; ++d)
      for (int i = d; i >= 0; --i)
        out.functions.push_back(Poly2D::monomial(i, d - i));
  } else if (space == SpaceLabel::Qk) {
    for (int i = 0; i <= k; ++i)
      for (int j = 0; j <= k; ++j)
        out.functions.push_back(Poly2D::monomial(i, j));
  } else {
    throw InvalidArgument("monomial_basis: only Pk and Qk have monomial bases");
  }
  return out;
}

inline Poly2D linear_combination(std::span<const double> coeffs, const BasisList& basis) {
  if (coeffs.size() != basis.size())
    throw InvalidArgument("linear_combination: coefficient count does not match basis size");
  int nx = 0, ny = 0;
  for (const auto& p : basis.functions) {
    nx = std::max(nx, p.nx());
    ny = std::max(ny, p.ny());
  }
  const double x0 = basis.size() ? basis[0].x0() : 0.0;
  const double y0 = basis.size() ? basis[0].y0() : 0.0;
  Poly2D out(nx, ny, x0, y0);
  for (std::size_t m = 0; m < coeffs.size(); ++m) {
    const Poly2D& p = (basis[m].x0() == x0 && basis[m].y0() == y0) ? basis[m] : basis[m].about(x0, y0);
    for (int i = 0; i <= p.nx(); ++i)
      for (int j = 0; j <= p.ny(); ++j)
        out.coeff(i, j) += coeffs[m] * p.coeff(i, j);
  }
  return out;
}

namespace detail {

inline double binomial(int n, int k) {
  double r = 1.0;
  for (int t = 1; t <= k; ++t)
    r = r * (n - k + t) / t;
  return std::round(r);
}

/// Coefficients in u = t - 1/2 of the shifted Legendre polynomial
/// P_n(2t - 1) = P_n(2u). Exact in double for n <= kMaxPolyDegree.
inline std::vector<double> shifted_legendre_centered(int n) {
  std::vector<double> c(static_cast<std::size_t>(n + 1), 0.0);
  for (int k = 0; 2 * k <= n; ++k) {
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    // P_n(s) = 2^-n sum_k (-1)^k C(n,k) C(2n-2k,n) s^(n-2k); s = 2u
    c[n - 2 * k] = sign * binomial(n, k) * binomial(2 * n - 2 * k, n) * std::ldexp(1.0, n - 2 * k - n);
  }
  return c;
}

/// Values and first derivatives of P_i(2t - 1), i = 0..n, by three-term
/// recurrence (no monomial expansion).
template <class T>
void shifted_legendre_table(int n, T t, std::span<T> val, std::span<T> der) {
  const T s = 2 * t - 1;
  val[0] = 1;
  der[0] = 0;
  if (n >= 1) {
    val[1] = s;
    der[1] = 1;
  }
  for (int m = 1; m < n; ++m) {
    val[m + 1] = ((2 * m + 1) * s * val[m] - m * val[m - 1]) / (m + 1);
    der[m + 1] = ((2 * m + 1) * (val[m] + s * der[m]) - m * der[m - 1]) / (m + 1);
  }
  // chain rule for ds/dt = 2
  for (int m = 0; m <= n; ++m)
    der[m] *= 2;
}

/// out[i] = d^r/dt^r P_i(2t - 1), i = 0..n, using
/// D^r P_(m+1) = D^r P_(m-1) + (2m+1) D^(r-1) P_m in s = 2t - 1.
inline std::vector<long double> shifted_legendre_derivative(int n, long double t, int r) {
  const long double s = 2 * t - 1;
  std::vector<long double> cur(static_cast<std::size_t>(n + 1), 0.0L);
  cur[0] = 1;
  if (n >= 1)
    cur[1] = s;
  for (int m = 1; m < n; ++m)
    cur[m + 1] = ((2 * m + 1) * s * cur[m] - m * cur[m - 1]) / (m + 1);
  for (int d = 1; d <= r; ++d) {
    std::vector<long double> next(static_cast<std::size_t>(n + 1), 0.0L);
    if (n >= 1)
      next[1] = d == 1 ? 1.0L : 0.0L;
    for (int m = 1; m < n; ++m)
      next[m + 1] = next[m - 1] + (2 * m + 1) * cur[m];
    cur = std::move(next);
  }
  const long double scale = std::ldexp(1.0L, r);
  for (auto& v : cur)
    v *= scale;
  return cur;
}

template <class T>
Poly2D legendre_to_monomial_impl(std::span<const T> leg, int k) {
  std::vector<std::vector<double>> tab(static_cast<std::size_t>(k + 1));
  for (int a = 0; a <= k; ++a)
    tab[a] = shifted_legendre_centered(a);
  std::vector<long double> acc(static_cast<std::size_t>((k + 1) * (k + 1)), 0.0L);
  for (int a = 0; a <= k; ++a)
    for (int b = 0; b <= k; ++b) {
      const long double c = leg[static_cast<std::size_t>(a * (k + 1) + b)];
      if (c == 0.0L)
        continue;
      for (int i = 0; i <= a; ++i)
        for (int j = 0; j <= b; ++j)
          acc[static_cast<std::size_t>(i * (k + 1) + j)] += c * tab[a][i] * tab[b][j];
    }
  Poly2D p(k, k, 0.5, 0.5);
  for (int i = 0; i <= k; ++i)
    for (int j = 0; j <= k; ++j)
      p.coeff(i, j) = static_cast<double>(acc[static_cast<std::size_t>(i * (k + 1) + j)]);
  return p;
}

/// Converts tensor-Legendre coefficients (index a*(k+1)+b multiplies
/// P_a(2x-1) P_b(2y-1)) into a Poly2D of bidegree (k, k) expanded about the
/// centre (1/2, 1/2) of the reference square.
inline Poly2D legendre_to_monomial(std::span<const double> leg, int k) { return legendre_to_monomial_impl(leg, k); }

inline Poly2D legendre_to_monomial(std::span<const long double> leg, int k) {
  return legendre_to_monomial_impl(leg, k);
}

} // namespace detail
} // namespace c1fem
