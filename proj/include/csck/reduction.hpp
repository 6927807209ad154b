#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "csck/error.hpp"
#include "csck/poly.hpp"

namespace csck {

struct RadialProblem {
  int n = 2;
  double R = 0.0;
  double lambda = 0.0;
  double mu = 0.0;
};

/// The reduced equation g^k g' / H(g) = 1/s.
struct OdeData {
  RadialProblem problem;
  Poly H;
  int k = 1;
};

inline OdeData build_ode(const RadialProblem& problem) {
  if (problem.n < 2) throw Error(ErrorCode::InvalidArgument, "dimension n must be at least 2");
  const int n = problem.n;
  std::vector<double> c(static_cast<std::size_t>(n) + 2, 0.0);
  c[0] = problem.mu;
  c[1] += problem.lambda;
  c[n] += 1.0;
  c[n + 1] = -problem.R / (n * (n + 1.0));
  return OdeData{problem, Poly(std::move(c)), n - 1};
}

/// g' from the equation itself.
inline double ode_slope(const OdeData& ode, double s, double g) {
  return ode.H(g) / (s * std::pow(g, ode.k));
}

using ScalarFn = std::function<double(double)>;

/// A candidate g with optional analytic derivatives. Missing derivatives are
/// taken by Richardson-extrapolated central differences.
struct RadialProfile {
  ScalarFn g;
  ScalarFn dg;
  ScalarFn d2g;
};

namespace detail {

// Central differences at h, h/2, h/4 combined by a Richardson table, which
// cancels the h^2 and h^4 error terms.
template <class Stencil>
double richardson(Stencil d, double h) {
  const double d0 = d(h);
  const double d1 = d(0.5 * h);
  const double d2 = d(0.25 * h);
  const double e1 = (4.0 * d1 - d0) / 3.0;
  const double e2 = (4.0 * d2 - d1) / 3.0;
  return (16.0 * e2 - e1) / 15.0;
}

inline double richardson_d1(const ScalarFn& f, double s, double h) {
  return richardson([&](double k) { return (f(s + k) - f(s - k)) / (2.0 * k); }, h);
}

inline double richardson_d2(const ScalarFn& f, double s, double h) {
  const double f0 = f(s);
  return richardson([&](double k) { return (f(s + k) - 2.0 * f0 + f(s - k)) / (k * k); }, h);
}

inline double first_derivative(const RadialProfile& p, double s) {
  return p.dg ? p.dg(s) : richardson_d1(p.g, s, 1e-2 * s);
}

inline double second_derivative(const RadialProfile& p, double s) {
  if (p.d2g) return p.d2g(s);
  if (p.dg) return richardson_d1(p.dg, s, 1e-2 * s);
  return richardson_d2(p.g, s, 2e-2 * s);
}

inline void require_kahler(double s, double g, double dg) {
  if (!(g > 0.0) || !(dg > 0.0))
    throw Error(ErrorCode::NotKahler, "g and g' must be positive at s = " + std::to_string(s), s);
}

}  // namespace detail

/// s -> log(g^{n-1} g' / s^{n-1}), the log of the metric determinant.
inline ScalarFn f_of(RadialProfile p, int n) {
  if (n < 2) throw Error(ErrorCode::InvalidArgument, "dimension n must be at least 2");
  return [p = std::move(p), n](double s) {
    const double g = p.g(s);
    const double dg = detail::first_derivative(p, s);
    detail::require_kahler(s, g, dg);
    return (n - 1) * std::log(g / s) + std::log(dg);
  };
}

/// f' by the chain rule: (n-1) g'/g + g''/g' - (n-1)/s.
inline double f_prime(const RadialProfile& p, int n, double s) {
  const double g = p.g(s);
  const double dg = detail::first_derivative(p, s);
  detail::require_kahler(s, g, dg);
  const double d2g = detail::second_derivative(p, s);
  return (n - 1) * (dg / g - 1.0 / s) + d2g / dg;
}

struct ConstantsFit {
  double lambda = 0.0;
  double mu = 0.0;
  double spread = 0.0;  // max deviation of either constant across the window
};

inline std::vector<double> log_spaced(double lo, double hi, int count) {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(count));
  if (count == 1) return {std::sqrt(lo * hi)};
  for (int i = 0; i < count; ++i) out.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / (count - 1)));
  return out;
}

inline constexpr double kConstancyTol = 1e-7;

/// Evaluates the two first integrals of the constant-R equation across a
/// window of s and returns their mean. Throws NotCsck if they drift.
inline ConstantsFit recover_constants(const RadialProfile& p, int n, double R,
                                      std::span<const double> window, double tol = kConstancyTol) {
  if (n < 2) throw Error(ErrorCode::InvalidArgument, "dimension n must be at least 2");
  if (window.empty()) throw Error(ErrorCode::InvalidArgument, "empty sample window");
  std::vector<double> lambdas;
  std::vector<double> mus;
  for (double s : window) {
    const double g = p.g(s);
    const double dg = detail::first_derivative(p, s);
    detail::require_kahler(s, g, dg);
    const double gk = std::pow(g, n - 1);
    const double lambda = s * gk * f_prime(p, n, s) + (R / n) * gk * g;
    const double mu = s * gk * dg + R / (n * (n + 1.0)) * gk * g * g - gk * g - lambda * g;
    lambdas.push_back(lambda);
    mus.push_back(mu);
  }
  auto spread_of = [](const std::vector<double>& v) {
    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    return *hi - *lo;
  };
  ConstantsFit fit;
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    fit.lambda += lambdas[i];
    fit.mu += mus[i];
  }
  fit.lambda /= static_cast<double>(lambdas.size());
  fit.mu /= static_cast<double>(mus.size());
  fit.spread = std::max(spread_of(lambdas), spread_of(mus));
  if (!(fit.spread <= tol))
    throw Error(ErrorCode::NotCsck, "lambda/mu are not constant across the window", fit.spread);
  return fit;
}

inline ConstantsFit recover_constants(const RadialProfile& p, int n, double R) {
  const auto window = log_spaced(0.5, 2.0, 8);
  return recover_constants(p, n, R, window);
}

struct OdeSample {
  double s;
  double g;
  double dg;
};

/// max |s g^{n-1} g' - H(g)| / (1 + |H(g)|) over the samples.
inline double ode_residual(std::span<const OdeSample> samples, const OdeData& ode) {
  double worst = 0.0;
  for (const auto& smp : samples) {
    const double h = ode.H(smp.g);
    if (h == 0.0 || std::abs(h) <= 1e-15 * ode.H.abs_scale(smp.g))
      throw Error(ErrorCode::EndpointSample, "H vanishes at sample s = " + std::to_string(smp.s), smp.s);
    const double lhs = smp.s * std::pow(smp.g, ode.k) * smp.dg;
    worst = std::max(worst, std::abs(lhs - h) / (1.0 + std::abs(h)));
  }
  return worst;
}

}  // namespace csck
