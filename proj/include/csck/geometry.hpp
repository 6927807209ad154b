#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <optional>
#include <vector>

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "csck/error.hpp"
#include "csck/quadrature.hpp"
#include "csck/reduction.hpp"

namespace csck {

/// Everything the radial potential determines at one radius s = |z|^2.
struct MetricSample {
  double s = 0.0;
  double g = 0.0;
  double u = 0.0;
  double up = 0.0;
  double upp = 0.0;
  double f = 0.0;  // log det of the metric matrix
  double R_num = 0.0;
};

inline constexpr double kPotentialTol = 1e-11;

/// Where u is pinned to zero: s = 1 when the domain contains it, otherwise
/// the geometric (or arithmetic, if s_lo = 0) midpoint of the domain.
inline double potential_anchor(const RadialSolution& sol) {
  if (sol.contains(1.0)) return 1.0;
  if (std::isinf(sol.s_hi())) return 2.0 * sol.s_lo();
  if (sol.s_lo() > 0.0) return std::sqrt(sol.s_lo() * sol.s_hi());
  return 0.5 * sol.s_hi();
}

/// u(s) = integral of g(t)/t from the anchor to s, done in tau = log t.
inline double potential_u(const RadialSolution& sol, double s) {
  if (!(s > 0.0) || !sol.contains(s))
    throw Error(ErrorCode::OutOfDomain, "s = " + std::to_string(s) + " is outside the solution's domain", s);
  const double a = std::log(potential_anchor(sol));
  const double b = std::log(s);
  if (a == b) return 0.0;
  auto integrand = [&sol](double tau) { return sol.g(std::exp(tau)); };
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(integrand, a, b, 15, kPotentialTol);
}

inline double potential_up(const RadialSolution& sol, double s) { return sol.g(s) / s; }

/// u'' = (s g' - g) / s^2.
inline double potential_upp(const RadialSolution& sol, double s) {
  const double g = sol.g(s);
  return (s * ode_slope(sol.ode(), s, g) - g) / (s * s);
}

/// The matrix delta_jk u' + u'' conj(z_j) z_k.
inline Eigen::MatrixXcd metric_tensor(const RadialSolution& sol, const Eigen::VectorXcd& z) {
  const int n = sol.ode().problem.n;
  if (z.size() != n) throw Error(ErrorCode::InvalidArgument, "z must have n components");
  const double s = z.squaredNorm();
  if (!(s > 0.0)) throw Error(ErrorCode::InvalidArgument, "z must be nonzero");
  if (!sol.contains(s)) throw Error(ErrorCode::OutOfDomain, "|z|^2 is outside the solution's domain", s);
  const double up = potential_up(sol, s);
  const double upp = potential_upp(sol, s);
  Eigen::MatrixXcd G = upp * (z.conjugate() * z.transpose());
  G.diagonal().array() += up;
  if (!(up > 0.0) || !(up + s * upp > 0.0) || G.llt().info() != Eigen::Success)
    throw Error(ErrorCode::NotKahler, "metric matrix is not positive definite", s);
  return G;
}

/// (u')^{n-1} (u' + s u''), the determinant of the metric matrix.
inline double metric_determinant(const RadialSolution& sol, double s) {
  const int n = sol.ode().problem.n;
  const double up = potential_up(sol, s);
  return std::pow(up, n - 1) * (up + s * potential_upp(sol, s));
}

/// R along the solution. With P = s g^{n-1} f' one has P' = Q'(g) psi / s where
/// Q = H' - n x^{n-1}, so R = -Q'(g) / g^{n-1}.
inline double scalar_curvature(const RadialSolution& sol, double s) {
  const double g = sol.g(s);
  const auto& ode = sol.ode();
  const int n = ode.problem.n;
  const double q_prime = derivative(derivative(ode.H))(g) - n * (n - 1.0) * std::pow(g, n - 2);
  return -q_prime / std::pow(g, n - 1);
}

inline constexpr double kCurvatureStep = 1e-4;

/// R = -s^{1-n} e^{-f} P'(s) with P' by Richardson central differences.
inline double scalar_curvature_fd(const RadialSolution& sol, double s) {
  const int n = sol.ode().problem.n;
  if (!sol.contains(s) || !sol.contains(s * (1.0 - kCurvatureStep)) || !sol.contains(s * (1.0 + kCurvatureStep)))
    throw Error(ErrorCode::OutOfDomain, "finite-difference stencil leaves the domain", s);
  const RadialProfile prof = sol.profile();
  const ScalarFn P = [&](double t) { return t * std::pow(sol.g(t), n - 1) * f_prime(prof, n, t); };
  const double dP = detail::richardson_d1(P, s, kCurvatureStep * s);
  const double g = sol.g(s);
  return -dP / (std::pow(g, n - 1) * ode_slope(sol.ode(), s, g));
}

inline MetricSample metric_sample(const RadialSolution& sol, double s) {
  MetricSample m;
  m.s = s;
  m.g = sol.g(s);
  m.u = potential_u(sol, s);
  m.up = m.g / s;
  m.upp = potential_upp(sol, s);
  m.f = f_of(sol.profile(), sol.ode().problem.n)(s);
  m.R_num = scalar_curvature(sol, s);
  return m;
}

struct VerifyReport {
  double R_target = 0.0;
  int used = 0;          // samples entering the residual maxima
  int excluded = 0;      // near-endpoint samples, reported but not scored
  int fd_skipped = 0;    // scored samples too close to a root of H for the FD check
  double max_R_residual = 0.0;
  double max_R_fd_residual = 0.0;
  double max_fd_gap = 0.0;     // |analytic - FD| / (1 + |R|)
  double max_det_residual = 0.0;
  double min_positivity = INFINITY;  // min(u', u' + s u'')
  double R_mean = 0.0;
  double R_stddev = 0.0;
  std::vector<MetricSample> samples;
};

struct SampleRange {
  double s_min = 0.0;
  double s_max = 0.0;
};

/// Default sampling window: [1e-2, 1e2] clipped to the domain.
inline SampleRange default_range(const RadialSolution& sol) {
  SampleRange r{1e-2, 1e2};
  if (std::isfinite(sol.s_hi())) r.s_max = std::min(r.s_max, sol.s_hi() * (1.0 - 1e-6));
  if (sol.s_lo() > 0.0) r.s_min = std::max(r.s_min, sol.s_lo() * (1.0 + 1e-6));
  if (!(r.s_min < r.s_max)) r.s_min = r.s_max * 1e-2;
  return r;
}

/// Samples near an end of the domain, where log-singular quantities spoil
/// the finite-difference cross-check.
inline bool near_endpoint(const RadialSolution& sol, double s) {
  if (s < 1e-3) return true;
  if (std::isfinite(sol.s_hi()) && s > 0.999 * sol.s_hi()) return true;
  return sol.s_lo() > 0.0 && s < 1.001 * sol.s_lo();
}

/// Whether g sits far enough from the roots bounding it for H(g), and with it
/// g' and f', to carry the digits a finite-difference check needs.
inline bool fd_resolvable(const RadialSolution& sol, double g) {
  const Branch& b = sol.branch();
  const double tol = 1e-6;
  if (b.A > 0.0 && g - b.A < tol * (1.0 + b.A)) return false;
  return b.right_infinite() || b.B - g >= tol * (1.0 + b.B);
}

inline VerifyReport verify_solution(const RadialSolution& sol, int n_samples,
                                    std::optional<SampleRange> range = std::nullopt) {
  if (n_samples < 1) throw Error(ErrorCode::InvalidArgument, "n_samples must be positive");
  const SampleRange r = range.value_or(default_range(sol));
  const int n = sol.ode().problem.n;
  VerifyReport rep;
  rep.R_target = sol.ode().problem.R;
  std::vector<double> scored;
  for (double s : log_spaced(r.s_min, r.s_max, n_samples)) {
    const MetricSample m = metric_sample(sol, s);
    rep.samples.push_back(m);
    if (near_endpoint(sol, s)) {
      ++rep.excluded;
      continue;
    }
    ++rep.used;
    scored.push_back(m.R_num);
    rep.max_R_residual = std::max(rep.max_R_residual, std::abs(m.R_num - rep.R_target));
    if (fd_resolvable(sol, m.g)) {
      const double r_fd = scalar_curvature_fd(sol, s);
      rep.max_R_fd_residual = std::max(rep.max_R_fd_residual, std::abs(r_fd - rep.R_target));
      rep.max_fd_gap = std::max(rep.max_fd_gap, std::abs(r_fd - m.R_num) / (1.0 + std::abs(m.R_num)));
    } else {
      ++rep.fd_skipped;
    }
    rep.min_positivity = std::min({rep.min_positivity, m.up, m.up + s * m.upp});

    // Determinant identity at a point with all coordinates equal in modulus.
    Eigen::VectorXcd z(n);
    for (int j = 0; j < n; ++j) z(j) = std::polar(std::sqrt(s / n), 0.7 * j);
    const double det = metric_tensor(sol, z).determinant().real();
    const double expected = std::pow(m.up, n - 1) * (m.up + s * m.upp);
    rep.max_det_residual = std::max(rep.max_det_residual, std::abs(det - expected) / std::abs(expected));
  }
  if (!scored.empty()) {
    for (double x : scored) rep.R_mean += x;
    rep.R_mean /= static_cast<double>(scored.size());
    double var = 0.0;
    for (double x : scored) var += (x - rep.R_mean) * (x - rep.R_mean);
    rep.R_stddev = std::sqrt(var / static_cast<double>(scored.size()));
  }
  return rep;
}

}  // namespace csck
