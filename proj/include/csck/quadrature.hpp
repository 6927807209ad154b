#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <boost/numeric/odeint.hpp>

#include "csck/classify.hpp"
#include "csck/error.hpp"
#include "csck/poly.hpp"
#include "csck/reduction.hpp"

namespace csck {

enum class TermKind { LogLinear, RecipPower, LogQuadratic, ArcTan };

constexpr std::string_view to_string(TermKind k) noexcept {
  switch (k) {
    case TermKind::LogLinear: return "LogLinear";
    case TermKind::RecipPower: return "RecipPower";
    case TermKind::LogQuadratic: return "LogQuadratic";
    case TermKind::ArcTan: return "ArcTan";
  }
  return "Unknown";
}

/// One summand of F.
///   LogLinear     c log|x - a|
///   RecipPower    c / (x - a)^p
///   LogQuadratic  c log((x - a)^2 + gamma^2)
///   ArcTan        c arctan((x - a) / gamma)
struct Term {
  TermKind kind;
  double c;
  double a;
  double gamma = 0.0;
  int p = 0;

  double value(double x) const {
    const double d = x - a;
    switch (kind) {
      case TermKind::LogLinear: return c * std::log(std::abs(d));
      case TermKind::RecipPower: return c / std::pow(d, p);
      case TermKind::LogQuadratic: return c * std::log(d * d + gamma * gamma);
      case TermKind::ArcTan: return c * std::atan(d / gamma);
    }
    return 0.0;
  }

  double derivative(double x) const {
    const double d = x - a;
    switch (kind) {
      case TermKind::LogLinear: return c / d;
      case TermKind::RecipPower: return -p * c / std::pow(d, p + 1);
      case TermKind::LogQuadratic: return 2.0 * c * d / (d * d + gamma * gamma);
      case TermKind::ArcTan: return c * gamma / (d * d + gamma * gamma);
    }
    return 0.0;
  }
};

/// overall_scale * sum of terms; its derivative is x^k / H(x).
struct AntiderivativeF {
  std::vector<Term> terms;
  double overall_scale = 1.0;
};

inline double eval_F(const AntiderivativeF& F, double x) {
  double acc = 0.0;
  for (const auto& t : F.terms) {
    if (t.kind == TermKind::LogLinear && x == t.a) return t.c * F.overall_scale > 0.0 ? -INFINITY : INFINITY;
    acc += t.value(x);
  }
  return F.overall_scale * acc;
}

inline double eval_dF(const AntiderivativeF& F, double x) {
  double acc = 0.0;
  for (const auto& t : F.terms) acc += t.derivative(x);
  return F.overall_scale * acc;
}

namespace detail {

inline Poly power_of(const Poly& base, int e) {
  Poly out{1.0};
  for (int i = 0; i < e; ++i) out = out * base;
  return out;
}

// First `count` Taylor coefficients of num/den at 0, from their own coefficients.
inline std::vector<double> series_divide(const Poly& num, const Poly& den, int count) {
  std::vector<double> q(static_cast<std::size_t>(count), 0.0);
  const double d0 = den.coeff(0);
  for (int i = 0; i < count; ++i) {
    double acc = num.coeff(i);
    for (int j = 1; j <= i; ++j) acc -= den.coeff(j) * q[static_cast<std::size_t>(i - j)];
    q[static_cast<std::size_t>(i)] = acc / d0;
  }
  return q;
}

}  // namespace detail

/// Closed-form antiderivative of x^k / H by partial fractions over the real
/// factorization of H. A common power of x is cancelled first. The branch only
/// fixes which side of each root the logs are read on, and |x - a| covers both.
inline AntiderivativeF partial_fractions(const OdeData& ode, const Branch& /*branch*/ = {}) {
  const RootProfile prof = real_root_profile(ode.H);
  for (const auto& q : prof.quad_factors)
    if (q.multiplicity > 1)
      throw Error(ErrorCode::UnsupportedMultiplicity, "repeated irreducible quadratic factor in H");

  std::vector<RealRoot> reals = prof.real_roots;
  int k = ode.k;
  for (auto& r : reals) {
    if (r.value == 0.0) {
      const int cancel = std::min(k, r.multiplicity);
      k -= cancel;
      r.multiplicity -= cancel;
    }
  }
  std::erase_if(reals, [](const RealRoot& r) { return r.multiplicity == 0; });

  auto linear = [](double r) { return Poly{-r, 1.0}; };
  auto quadratic = [](const QuadFactor& q) { return Poly{q.beta * q.beta + q.gamma * q.gamma, -2.0 * q.beta, 1.0}; };
  // Monic denominator with the factor at index `skip_real` / `skip_quad` left out.
  auto cofactor = [&](int skip_real, int skip_quad) {
    Poly d{1.0};
    for (int i = 0; i < static_cast<int>(reals.size()); ++i)
      if (i != skip_real) d = d * detail::power_of(linear(reals[i].value), reals[i].multiplicity);
    for (int j = 0; j < static_cast<int>(prof.quad_factors.size()); ++j)
      if (j != skip_quad) d = d * quadratic(prof.quad_factors[j]);
    return d;
  };

  AntiderivativeF F;
  F.overall_scale = 1.0 / prof.leading;
  const Poly numerator = Poly::monomial(1.0, k);

  for (int i = 0; i < static_cast<int>(reals.size()); ++i) {
    const double r = reals[i].value;
    const int m = reals[i].multiplicity;
    // Laurent coefficients at r: x^k / D = sum_j c_j (x - r)^{-j} + regular.
    const auto phi = detail::series_divide(taylor_shift(numerator, r), taylor_shift(cofactor(i, -1), r), m);
    for (int j = 1; j <= m; ++j) {
      const double cj = phi[static_cast<std::size_t>(m - j)];
      if (j == 1) F.terms.push_back({TermKind::LogLinear, cj, r});
      else F.terms.push_back({TermKind::RecipPower, -cj / (j - 1), r, 0.0, j - 1});
    }
  }
  for (int j = 0; j < static_cast<int>(prof.quad_factors.size()); ++j) {
    const auto& q = prof.quad_factors[j];
    const std::complex<double> z{q.beta, q.gamma};
    const Poly rest = cofactor(-1, j);
    std::complex<double> rest_z{0.0, 0.0};
    for (int i = rest.degree(); i >= 0; --i) rest_z = rest_z * z + rest.coeff(i);
    const std::complex<double> rho = std::pow(z, k) / (std::complex<double>{0.0, 2.0 * q.gamma} * rest_z);
    // rho/(x-z) + conj(rho)/(x-conj z) = (A x + B) / ((x-beta)^2 + gamma^2)
    const double A = 2.0 * rho.real();
    const double B = -2.0 * (rho * std::conj(z)).real();
    F.terms.push_back({TermKind::LogQuadratic, 0.5 * A, q.beta, q.gamma});
    F.terms.push_back({TermKind::ArcTan, (A * q.beta + B) / q.gamma, q.beta, q.gamma});
  }
  return F;
}

/// F(A+): -inf when the integral diverges at A.
inline double F_left_limit(const AntiderivativeF& F, const Branch& b) {
  return b.diverges_left ? -INFINITY : eval_F(F, b.A);
}

/// F(B-). For a convergent ray the log terms cancel (deg H >= k + 2) and
/// only the arctan terms survive, each tending to c * pi/2.
inline double F_right_limit(const AntiderivativeF& F, const Branch& b) {
  if (b.diverges_right) return INFINITY;
  if (!b.right_infinite()) return eval_F(F, b.B);
  double acc = 0.0;
  for (const auto& t : F.terms)
    if (t.kind == TermKind::ArcTan) acc += t.c * std::numbers::pi / 2.0;
  return F.overall_scale * acc;
}

/// g(s) on one branch with F(g(s)) = log s + c.
class RadialSolution {
 public:
  RadialSolution(OdeData ode, Branch branch, AntiderivativeF F, double c)
      : ode_(std::move(ode)), branch_(branch), F_(std::move(F)), c_(c) {
    F_lo_ = F_left_limit(F_, branch_);
    F_hi_ = F_right_limit(F_, branch_);
    s_lo_ = branch_.diverges_left ? 0.0 : std::exp(F_lo_ - c_);
    s_hi_ = branch_.diverges_right ? INFINITY : std::exp(F_hi_ - c_);
    build_cache();
  }

  const OdeData& ode() const { return ode_; }
  const Branch& branch() const { return branch_; }
  const AntiderivativeF& F() const { return F_; }
  double c() const { return c_; }
  double s_lo() const { return s_lo_; }
  double s_hi() const { return s_hi_; }
  bool contains(double s) const { return s > s_lo_ && s < s_hi_; }

  /// The unique g in (A, B) with F(g) = log s + c.
  double g(double s) const {
    if (!(s > 0.0) || !contains(s))
      throw Error(ErrorCode::OutOfDomain, "s = " + std::to_string(s) + " is outside the solution's domain", s);
    const double target = std::log(s) + c_;
    if (!(target > F_lo_ && target < F_hi_))
      throw Error(ErrorCode::OutOfDomain, "log s + c is outside the range of F", s);
    auto [lo, hi] = bracket(target);
    const double x = polish(target, lo, hi);
    return std::clamp(x, std::nextafter(branch_.A, INFINITY), std::nextafter(branch_.B, -INFINITY));
  }

  /// g' = H(g) / (s g^k).
  double dg(double s) const { return ode_slope(ode_, s, g(s)); }

  /// g'' = psi(g) (psi'(g) - 1) / s^2 with psi = H / x^k.
  double d2g(double s) const {
    const double x = g(s);
    const double psi = ode_.H(x) / std::pow(x, ode_.k);
    const double dpsi = derivative(ode_.H)(x) / std::pow(x, ode_.k) - ode_.k * ode_.H(x) / std::pow(x, ode_.k + 1);
    return psi * (dpsi - 1.0) / (s * s);
  }

  RadialProfile profile() const {
    return {[this](double s) { return g(s); }, [this](double s) { return dg(s); },
            [this](double s) { return d2g(s); }};
  }

 private:
  void build_cache() {
    const double A = branch_.A;
    if (branch_.right_infinite()) {
      const double w = std::max(1.0, A);
      for (int j = -40; j <= 40; ++j) push_sample(A + w * std::ldexp(1.0, j));
    } else {
      const int N = 64;
      for (int i = 1; i <= N; ++i)
        push_sample(A + (branch_.B - A) * 0.5 * (1.0 - std::cos(std::numbers::pi * i / (N + 1.0))));
    }
  }

  void push_sample(double x) {
    if (!(x > branch_.A && x < branch_.B)) return;
    const double f = eval_F(F_, x);
    if (!std::isfinite(f)) return;
    if (!xs_.empty() && !(x > xs_.back() && f > fs_.back())) return;
    xs_.push_back(x);
    fs_.push_back(f);
  }

  std::pair<double, double> bracket(double target) const {
    const double A = branch_.A;
    const double B = branch_.B;
    const auto it = std::upper_bound(fs_.begin(), fs_.end(), target);
    if (it != fs_.begin() && it != fs_.end()) {
      const auto i = static_cast<std::size_t>(it - fs_.begin());
      return {xs_[i - 1], xs_[i]};
    }
    if (it == fs_.begin()) {
      // Doubling search toward A.
      double hi = xs_.empty() ? (std::isinf(B) ? A + 1.0 : 0.5 * (A + B)) : xs_.front();
      double gap = hi - A;
      for (int j = 0; j < 2100; ++j) {
        gap *= 0.5;
        const double x = A + gap;
        if (!(x > A)) break;
        if (eval_F(F_, x) <= target) return {x, hi};
        hi = x;
      }
      return {A, hi};
    }
    double lo = xs_.back();
    if (std::isinf(B)) {
      double step = std::max(1.0, lo - A);
      for (int j = 0; j < 2100; ++j) {
        step *= 2.0;
        const double x = A + step;
        if (!std::isfinite(x)) break;
        if (eval_F(F_, x) >= target) return {lo, x};
        lo = x;
      }
      throw Error(ErrorCode::OutOfDomain, "could not bracket g beyond the sample table");
    }
    double gap = B - lo;
    for (int j = 0; j < 2100; ++j) {
      gap *= 0.5;
      const double x = B - gap;
      if (!(x < B)) break;
      if (eval_F(F_, x) >= target) return {lo, x};
      lo = x;
    }
    return {lo, B};
  }

  // Bisection to a narrow bracket, then Newton kept inside it.
  double polish(double target, double lo, double hi) const {
    for (int it = 0; it < 200 && hi - lo > 1e-13 * (1.0 + std::abs(lo)); ++it) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      if (eval_F(F_, mid) < target) lo = mid;
      else hi = mid;
    }
    double x = 0.5 * (lo + hi);
    for (int it = 0; it < 50; ++it) {
      const double r = eval_F(F_, x) - target;
      if (r == 0.0) return x;
      if (r < 0.0) lo = x;
      else hi = x;
      const double d = eval_dF(F_, x);
      double next = x - r / d;
      if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
      if (std::abs(next - x) <= 2.0 * std::numeric_limits<double>::epsilon() * std::abs(x)) return next;
      x = next;
    }
    return x;
  }

  OdeData ode_;
  Branch branch_;
  AntiderivativeF F_;
  double c_;
  double F_lo_ = 0.0;
  double F_hi_ = 0.0;
  double s_lo_ = 0.0;
  double s_hi_ = INFINITY;
  // Monotone (x, F(x)) table fixed at construction; read-only afterwards.
  std::vector<double> xs_;
  std::vector<double> fs_;
};

inline double solve_g(const RadialSolution& sol, double s) { return sol.g(s); }

inline RadialSolution gauge_from_constant(const OdeData& ode, const Branch& branch, const AntiderivativeF& F,
                                          double c) {
  return RadialSolution(ode, branch, F, c);
}

/// Chooses c so that g(s0) = g0.
inline RadialSolution gauge_from_anchor(const OdeData& ode, const Branch& branch, const AntiderivativeF& F,
                                        double s0, double g0) {
  if (!(s0 > 0.0)) throw Error(ErrorCode::BadAnchor, "anchor s0 must be positive", s0);
  if (!(g0 > branch.A && g0 < branch.B))
    throw Error(ErrorCode::BadAnchor, "anchor g0 must lie strictly inside (A, B)", g0);
  return RadialSolution(ode, branch, F, eval_F(F, g0) - std::log(s0));
}

/// Chooses c = F(B-) so that the maximal s-interval ends at s = 1.
inline RadialSolution ball_normalize(const OdeData& ode, const Branch& branch, const AntiderivativeF& F) {
  if (branch.diverges_right)
    throw Error(ErrorCode::NotNormalizable, "F diverges at the right end; the solution fills a ray");
  return RadialSolution(ode, branch, F, F_right_limit(F, branch));
}

// ---------------------------------------------------------------------------
// Independent oracle: direct integration of g' = H(g) / (s g^k).

struct ShootResult {
  std::vector<std::pair<double, double>> samples;  // (s, g) for each target reached, in target order
  std::optional<double> domain_end;                // s where integration had to stop
};

inline constexpr double kShootRelTol = 1e-14;
inline constexpr double kShootAbsTol = 1e-16;

/// Runge-Kutta-Fehlberg 7(8) in t = log s, where the equation is autonomous:
/// dg/dt = H(g) / g^k. Targets on each side of s0 are integrated outward in
/// order; integration stops at a step underflow or when g leaves (0, inf)
/// or the positivity region of H.
inline ShootResult shoot_ode(const OdeData& ode, double s0, double g0, std::vector<double> targets) {
  namespace odeint = boost::numeric::odeint;
  if (!(s0 > 0.0)) throw Error(ErrorCode::InvalidArgument, "s0 must be positive", s0);
  if (!(g0 > 0.0) || !(ode.H(g0) > 0.0)) throw Error(ErrorCode::BadAnchor, "H(g0) must be positive", g0);

  using State = std::array<double, 1>;
  const auto rhs = [&ode](const State& y, State& dy, double) { dy[0] = ode.H(y[0]) / std::pow(y[0], ode.k); };
  auto stepper = odeint::make_controlled(kShootAbsTol, kShootRelTol, odeint::runge_kutta_fehlberg78<State>());

  ShootResult out;
  std::vector<std::pair<double, double>> results(targets.size(), {NAN, NAN});
  std::vector<std::size_t> order(targets.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return targets[a] < targets[b]; });

  auto run = [&](const std::vector<std::size_t>& idx) {
    State y{g0};
    double t = std::log(s0);
    double dt = 0.0;
    for (std::size_t i : idx) {
      const double t_target = std::log(targets[i]);
      if (dt == 0.0) dt = (t_target >= t ? 1e-3 : -1e-3);
      while (t != t_target) {
        const double remaining = t_target - t;
        if (std::abs(dt) > std::abs(remaining)) dt = remaining;
        const State y_before = y;
        const double t_before = t;
        const double dt_before = dt;
        const auto res = stepper.try_step(rhs, y, t, dt);
        const bool bad = !std::isfinite(y[0]) || !(y[0] > 0.0) || std::abs(y[0]) > 1e15 || !(ode.H(y[0]) > 0.0);
        if (res == odeint::success && !bad) continue;
        if (bad) {
          // Overshot the positivity region or blew up: retry with a shorter step.
          y = y_before;
          t = t_before;
          dt = 0.5 * dt_before;
        }
        if (std::abs(dt) < 1e-14 * std::max(1.0, std::abs(t))) {
          out.domain_end = std::exp(t);
          return false;
        }
      }
      results[i] = {targets[i], y[0]};
    }
    return true;
  };

  std::vector<std::size_t> forward;
  std::vector<std::size_t> backward;
  for (std::size_t i : order) (targets[i] >= s0 ? forward : backward).push_back(i);
  std::reverse(backward.begin(), backward.end());
  if (!targets.empty()) {
    for (auto i : order)
      if (!(targets[i] > 0.0)) throw Error(ErrorCode::InvalidArgument, "targets must be positive");
  }
  run(backward);
  run(forward);
  for (const auto& r : results)
    if (!std::isnan(r.first)) out.samples.push_back(r);
  return out;
}

}  // namespace csck
