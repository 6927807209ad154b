#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "csck/error.hpp"

namespace csck {

/// Real polynomial with coefficients stored in ascending degree. The highest
/// stored coefficient is always nonzero; the zero polynomial stores nothing.
class Poly {
 public:
  Poly() = default;
  explicit Poly(std::vector<double> coeffs) : c_(std::move(coeffs)) { trim(); }
  Poly(std::initializer_list<double> coeffs) : Poly(std::vector<double>(coeffs)) {}

  static Poly monomial(double coeff, int power) {
    std::vector<double> c(static_cast<std::size_t>(power) + 1, 0.0);
    c.back() = coeff;
    return Poly(std::move(c));
  }

  bool is_zero() const noexcept { return c_.empty(); }

  int degree() const {
    if (c_.empty()) throw Error(ErrorCode::ZeroPoly, "degree of the zero polynomial");
    return static_cast<int>(c_.size()) - 1;
  }

  double leading() const noexcept { return c_.empty() ? 0.0 : c_.back(); }

  double coeff(int i) const noexcept {
    return i >= 0 && static_cast<std::size_t>(i) < c_.size() ? c_[static_cast<std::size_t>(i)] : 0.0;
  }

  std::span<const double> coeffs() const noexcept { return c_; }

  template <typename T>
  T operator()(T x) const {
    T acc(0);
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
    return acc;
  }

  /// Sum of |c_i| |x|^i; the natural scale of rounding error in p(x).
  double abs_scale(double x) const {
    double acc = 0.0;
    const double ax = std::abs(x);
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * ax + std::abs(*it);
    return acc;
  }

  double norm_inf() const {
    double m = 0.0;
    for (double v : c_) m = std::max(m, std::abs(v));
    return m;
  }

  Poly& operator+=(const Poly& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), 0.0);
    for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
    trim();
    return *this;
  }
  Poly& operator-=(const Poly& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), 0.0);
    for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
    trim();
    return *this;
  }
  Poly& operator*=(double s) {
    for (double& v : c_) v *= s;
    trim();
    return *this;
  }

  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator*(Poly a, double s) { return a *= s; }
  friend Poly operator*(double s, Poly a) { return a *= s; }
  friend Poly operator*(const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<double> c(a.c_.size() + b.c_.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.c_.size(); ++i)
      for (std::size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
    return Poly(std::move(c));
  }
  friend bool operator==(const Poly&, const Poly&) = default;

 private:
  void trim() {
    while (!c_.empty() && c_.back() == 0.0) c_.pop_back();
  }

  std::vector<double> c_;
};

inline int degree(const Poly& p) { return p.degree(); }

inline double eval(const Poly& p, double x) { return p(x); }

inline Poly derivative(const Poly& p) {
  if (p.is_zero() || p.degree() == 0) return {};
  std::vector<double> c(static_cast<std::size_t>(p.degree()));
  for (int i = 1; i <= p.degree(); ++i) c[static_cast<std::size_t>(i - 1)] = i * p.coeff(i);
  return Poly(std::move(c));
}

inline Poly derivative(const Poly& p, int order) {
  Poly d = p;
  for (int i = 0; i < order; ++i) d = derivative(d);
  return d;
}

struct PolyDivision {
  Poly quotient;
  Poly remainder;
};

inline PolyDivision divide(const Poly& num, const Poly& den) {
  const int dd = den.degree();
  if (num.is_zero() || num.degree() < dd) return {Poly{}, num};
  std::vector<double> r(num.coeffs().begin(), num.coeffs().end());
  std::vector<double> q(static_cast<std::size_t>(num.degree() - dd) + 1, 0.0);
  const double lead = den.leading();
  for (int i = num.degree() - dd; i >= 0; --i) {
    const double t = r[static_cast<std::size_t>(i + dd)] / lead;
    q[static_cast<std::size_t>(i)] = t;
    for (int j = 0; j <= dd; ++j) r[static_cast<std::size_t>(i + j)] -= t * den.coeff(j);
    r[static_cast<std::size_t>(i + dd)] = 0.0;
  }
  r.resize(static_cast<std::size_t>(dd));
  return {Poly(std::move(q)), Poly(std::move(r))};
}

/// Coefficients of p(x + a), i.e. the Taylor expansion of p about a.
inline Poly taylor_shift(const Poly& p, double a) {
  std::vector<double> c(p.coeffs().begin(), p.coeffs().end());
  const std::size_t n = c.size();
  for (std::size_t i = 0; i + 1 < n; ++i)
    for (std::size_t j = n - 1; j > i; --j) c[j - 1] += a * c[j];
  return Poly(std::move(c));
}

/// Divides by (x - r) and drops the remainder.
inline Poly deflate_linear(const Poly& p, double r) {
  if (p.is_zero() || p.degree() == 0) return {};
  const int n = p.degree();
  std::vector<double> q(static_cast<std::size_t>(n));
  double acc = p.coeff(n);
  for (int i = n - 1; i >= 0; --i) {
    q[static_cast<std::size_t>(i)] = acc;
    acc = acc * r + p.coeff(i);
  }
  return Poly(std::move(q));
}

/// Monic product of (x - r) over the given roots.
inline Poly expand_roots(std::span<const double> roots) {
  Poly p{1.0};
  for (double r : roots) p = p * Poly{-r, 1.0};
  return p;
}

struct RealRoot {
  double value = 0.0;
  int multiplicity = 1;
};

/// Irreducible factor (x - beta)^2 + gamma^2 with gamma > 0.
struct QuadFactor {
  double beta = 0.0;
  double gamma = 1.0;
  int multiplicity = 1;
};

struct RootProfile {
  std::vector<RealRoot> real_roots;  // strictly increasing
  std::vector<QuadFactor> quad_factors;
  double leading = 1.0;

  int degree() const {
    int d = 0;
    for (const auto& r : real_roots) d += r.multiplicity;
    for (const auto& q : quad_factors) d += 2 * q.multiplicity;
    return d;
  }

  Poly reconstruct() const {
    Poly p{leading};
    for (const auto& r : real_roots)
      for (int i = 0; i < r.multiplicity; ++i) p = p * Poly{-r.value, 1.0};
    for (const auto& q : quad_factors)
      for (int i = 0; i < q.multiplicity; ++i)
        p = p * Poly{q.beta * q.beta + q.gamma * q.gamma, -2.0 * q.beta, 1.0};
    return p;
  }

  int multiplicity_at(double x, double abs_tol) const {
    for (const auto& r : real_roots)
      if (std::abs(r.value - x) <= abs_tol) return r.multiplicity;
    return 0;
  }
};

/// Sturm sequence p, p', -rem(...), ... truncated at the first remainder
/// that is zero relative to `tol`; the last element approximates gcd(p, p').
class SturmChain {
 public:
  SturmChain(const Poly& p, double tol) {
    seq_.push_back(normalized(p));
    Poly d = derivative(p);
    if (d.is_zero()) return;
    seq_.push_back(normalized(d));
    while (seq_.back().degree() > 0) {
      const Poly& a = seq_[seq_.size() - 2];
      const Poly& b = seq_.back();
      Poly r = divide(a, b).remainder;
      if (r.norm_inf() <= tol * std::max(a.norm_inf(), b.norm_inf())) break;
      seq_.push_back(normalized(-1.0 * r));
    }
  }

  int variations(double x) const {
    int changes = 0;
    int last = 0;
    for (const auto& p : seq_) {
      const double v = p(x);
      const int s = v > 0.0 ? 1 : (v < 0.0 ? -1 : 0);
      if (s == 0) continue;
      if (last != 0 && s != last) ++changes;
      last = s;
    }
    return changes;
  }

  /// Number of distinct real roots in (a, b].
  int count(double a, double b) const { return variations(a) - variations(b); }

  const Poly& gcd() const { return seq_.back(); }
  std::span<const Poly> sequence() const { return seq_; }

 private:
  static Poly normalized(const Poly& p) {
    const double s = p.norm_inf();
    return s > 0.0 ? p * (1.0 / s) : p;
  }

  std::vector<Poly> seq_;
};

inline constexpr double kRootTol = 1e-11;
/// Relative size below which q^(j)(x) counts as zero when confirming a multiple root.
inline constexpr double kMultiplicityTol = 1e-10;
inline constexpr double kReconstructionTol = 1e-9;

/// Two refined roots closer than this merge into one multiple root.
inline double cluster_threshold(double x) { return 1e-7 * (1.0 + std::abs(x)); }
// A root of multiplicity 3 in double coefficients splits by about eps^(1/3).
inline double merge_threshold(double x) { return 1e-4 * (1.0 + std::abs(x)); }

namespace detail {

// Safeguarded Newton on f inside [a, b] where f(a), f(b) have opposite signs.
inline double bracketed_newton(const Poly& f, double a, double b) {
  const Poly df = derivative(f);
  double fa = f(a);
  double fb = f(b);
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if (fa > 0.0) {
    std::swap(a, b);
    std::swap(fa, fb);
  }
  double x = 0.5 * (a + b);
  for (int it = 0; it < 200; ++it) {
    const double fx = f(x);
    if (fx == 0.0) return x;
    if (fx < 0.0) a = x;
    else b = x;
    const double dfx = df(x);
    double next = dfx != 0.0 ? x - fx / dfx : 0.5 * (a + b);
    const double lo = std::min(a, b);
    const double hi = std::max(a, b);
    if (!(next > lo && next < hi)) next = 0.5 * (a + b);
    if (std::abs(next - x) <= 1e-15 * (1.0 + std::abs(x)) || std::abs(b - a) <= 4e-16 * (1.0 + std::abs(x)))
      return next;
    x = next;
  }
  return x;
}

// Refines a root of f near x0 within +-w, falling back to x0.
inline double polish_near(const Poly& f, double x0, double w) {
  const double a = x0 - w;
  const double b = x0 + w;
  const double fa = f(a);
  const double fb = f(b);
  if ((fa < 0.0 && fb > 0.0) || (fa > 0.0 && fb < 0.0)) return bracketed_newton(f, a, b);
  const Poly df = derivative(f);
  double x = x0;
  for (int it = 0; it < 20; ++it) {
    const double d = df(x);
    if (d == 0.0) break;
    const double next = x - f(x) / d;
    if (std::abs(next - x0) > w) return x0;
    if (std::abs(next - x) <= 1e-16 * (1.0 + std::abs(x))) return next;
    x = next;
  }
  return x;
}

inline std::vector<RealRoot> merge_clusters(std::vector<RealRoot> roots, const Poly& q) {
  std::sort(roots.begin(), roots.end(), [](const RealRoot& x, const RealRoot& y) { return x.value < y.value; });
  std::vector<RealRoot> out;
  for (const auto& r : roots) {
    if (!out.empty() && std::abs(r.value - out.back().value) < merge_threshold(out.back().value)) {
      auto& b = out.back();
      const int m = b.multiplicity + r.multiplicity;
      const double x0 = (b.value * b.multiplicity + r.value * r.multiplicity) / m;
      b.value = polish_near(derivative(q, m - 1), x0, merge_threshold(x0));
      b.multiplicity = m;
    } else {
      out.push_back(r);
    }
  }
  return out;
}

// Distinct real roots of a nonzero-degree polynomial with multiplicities,
// found by Sturm isolation; multiplicity comes from recursing on gcd(q, q').
inline std::vector<std::complex<double>> complex_roots(const Poly& monic) {
  const int n = monic.degree();
  std::vector<std::complex<double>> out;
  if (n < 1) return out;
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(n, n);
  for (int j = 0; j < n; ++j) companion(0, j) = -monic.coeff(n - 1 - j) / monic.leading();
  for (int i = 1; i < n; ++i) companion(i, i - 1) = 1.0;
  Eigen::EigenSolver<Eigen::MatrixXd> es(companion, false);
  for (int i = 0; i < n; ++i) out.push_back(es.eigenvalues()(i));
  return out;
}

inline std::complex<double> newton_polish(const Poly& q, std::complex<double> z) {
  const Poly dq = derivative(q);
  for (int it = 0; it < 20; ++it) {
    const std::complex<double> d = dq(z);
    if (d == 0.0) break;
    const std::complex<double> step = q(z) / d;
    if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) break;
    if (std::abs(step) > 1e-3 * (1.0 + std::abs(z))) break;
    z -= step;
    if (std::abs(step) <= 1e-16 * (1.0 + std::abs(z))) break;
  }
  return z;
}

}  // namespace detail

namespace detail {

struct RootCluster {
  std::complex<double> center;  // upper half plane or real
  int multiplicity;
  bool real;
};

// True when q and its first m-1 derivatives all vanish at x to working accuracy.
inline bool vanishes_to_order(const Poly& q, double x, int m, double tol) {
  Poly d = q;
  for (int j = 0; j < m; ++j) {
    if (std::abs(d(x)) > tol * d.abs_scale(x)) return false;
    d = derivative(d);
  }
  return true;
}

inline bool vanishes_to_order(const Poly& q, std::complex<double> z, int m, double tol) {
  Poly d = q;
  for (int j = 0; j < m; ++j) {
    double scale = 0.0;
    for (int i = d.degree(); i >= 0; --i) scale = scale * std::abs(z) + std::abs(d.coeff(i));
    if (std::abs(d(z)) > tol * scale) return false;
    d = derivative(d);
  }
  return true;
}

// Single-linkage groups of eigenvalues closer than radius(z).
template <class Radius>
std::vector<std::vector<std::complex<double>>> link(const std::vector<std::complex<double>>& zs, Radius radius) {
  std::vector<int> parent(zs.size());
  for (std::size_t i = 0; i < zs.size(); ++i) parent[i] = static_cast<int>(i);
  auto find = [&](int i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (std::size_t i = 0; i < zs.size(); ++i)
    for (std::size_t j = i + 1; j < zs.size(); ++j)
      if (std::abs(zs[i] - zs[j]) < radius(zs[i])) parent[find(static_cast<int>(i))] = find(static_cast<int>(j));
  std::vector<std::vector<std::complex<double>>> groups(zs.size());
  for (std::size_t i = 0; i < zs.size(); ++i) groups[find(static_cast<int>(i))].push_back(zs[i]);
  std::erase_if(groups, [](const auto& g) { return g.empty(); });
  return groups;
}

// Distinct roots of q with multiplicities, read off the companion spectrum.
// A coarse group counts as one multiple root only if q vanishes to that order
// at its refined centre; otherwise the group is split at a fine radius.
inline std::vector<RootCluster> root_clusters(const Poly& q, double tol) {
  std::vector<RootCluster> out;
  const auto eig = complex_roots(q);
  auto coarse = [](std::complex<double> z) { return 5e-3 * (1.0 + std::abs(z)); };
  auto fine = [](std::complex<double> z) { return cluster_threshold(std::abs(z)); };

  auto settle = [&](const std::vector<std::complex<double>>& g, double r, bool strict) -> bool {
    std::complex<double> c{0.0, 0.0};
    for (auto z : g) c += z;
    c /= static_cast<double>(g.size());
    const int m = static_cast<int>(g.size());
    if (std::abs(c.imag()) <= r) {
      const double x = m == 1 ? polish_near(q, c.real(), r) : polish_near(derivative(q, m - 1), c.real(), r);
      if (strict && m > 1 && !vanishes_to_order(q, x, m - 1, tol)) return false;
      out.push_back({{x, 0.0}, m, true});
      return true;
    }
    if (c.imag() < 0.0) return true;  // mirrored by the upper group
    if (strict && m > 1 && !vanishes_to_order(q, c, m, tol)) return false;
    const auto z = m == 1 ? newton_polish(q, c) : c;
    out.push_back({z.imag() > 0.0 ? z : c, m, false});
    return true;
  };

  for (const auto& g : link(eig, coarse)) {
    if (settle(g, coarse(g.front()), true)) continue;
    for (const auto& h : link(g, fine)) settle(h, fine(h.front()), false);
  }
  return out;
}

}  // namespace detail

/// Real roots with multiplicities and irreducible quadratic factors of p.
/// Nearly coincident eigenvalues count as one root of multiplicity m when q
/// and its first m-1 derivatives vanish there to relative size `tol`.
inline RootProfile real_root_profile(const Poly& p, double tol = kMultiplicityTol) {
  if (p.is_zero() || p.degree() < 1)
    throw Error(ErrorCode::InvalidArgument, "real_root_profile needs degree >= 1");
  if (!(tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "tolerance must be positive");

  RootProfile profile;
  profile.leading = p.leading();
  Poly q = p * (1.0 / p.leading());

  const Poly monic = q;
  int zeros = 0;
  while (q.coeff(zeros) == 0.0) ++zeros;
  if (zeros > 0) {
    std::vector<double> c(q.coeffs().begin() + zeros, q.coeffs().end());
    q = Poly(std::move(c));
  }

  std::vector<RealRoot> reals;
  for (const auto& cl : detail::root_clusters(q, tol)) {
    if (cl.real) {
      reals.push_back({cl.center.real(), cl.multiplicity});
    } else {
      profile.quad_factors.push_back({cl.center.real(), cl.center.imag(), cl.multiplicity});
    }
  }
  std::sort(profile.quad_factors.begin(), profile.quad_factors.end(), [](const QuadFactor& x, const QuadFactor& y) {
    return x.beta != y.beta ? x.beta < y.beta : x.gamma < y.gamma;
  });

  if (zeros > 0) reals.push_back({0.0, zeros});
  profile.real_roots = detail::merge_clusters(std::move(reals), monic);

  const Poly rec = profile.reconstruct();
  double resid = 0.0;
  const int top = std::max(rec.is_zero() ? 0 : rec.degree(), p.degree());
  for (int i = 0; i <= top; ++i) resid = std::max(resid, std::abs(rec.coeff(i) - p.coeff(i)));
  resid /= p.norm_inf();
  if (profile.degree() != p.degree() || !(resid <= kReconstructionTol))
    throw Error(ErrorCode::IllConditioned, "root profile does not reproduce the polynomial", resid);
  return profile;
}

}  // namespace csck
