#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

#include "csck/error.hpp"

namespace csck {

/// Symmetric pairwise sum ab + ac + ad + bc + bd + cd.
inline double J_value(double a, double b, double c, double d) {
  return a * b + a * c + a * d + b * c + b * d + c * d;
}

inline double I_value(double a, double b, double c) { return a * a + 2.0 * a * b + 2.0 * a * c + b * c; }

/// J on {a + b + c + d = -1, a < 0 < b < c < d}, or
/// I on {2a + b + c = -1, b < 0 < c < a}.
enum class Inequality { J, I };

constexpr std::string_view to_string(Inequality w) noexcept { return w == Inequality::J ? "J" : "I"; }

struct ConstraintSample {
  std::vector<double> point;
  std::vector<double> constraint_residuals;  // linear constraint; order slacks are reported as signs
  double objective = -INFINITY;
};

struct Certificate {
  Inequality which = Inequality::J;
  int samples = 0;
  int climbs = 0;  // records that were hill-climbed
  double max_found = -INFINITY;
  ConstraintSample witness;
};

inline constexpr double kSampleLo = 1e-3;
inline constexpr double kSampleHi = 1e3;
inline constexpr int kClimbIterations = 100;

namespace detail {

/// Number of positive coordinates that parameterize each set.
inline int free_count(Inequality w) { return w == Inequality::J ? 3 : 2; }

/// Completes sorted positive parts to a point of the set. For J the parts are
/// (b, c, d); for I they are (c, a).
inline ConstraintSample complete(Inequality w, const std::vector<double>& pos) {
  ConstraintSample out;
  if (w == Inequality::J) {
    const double b = pos[0], c = pos[1], d = pos[2];
    const double a = -1.0 - (b + c + d);
    out.point = {a, b, c, d};
    out.constraint_residuals = {a + b + c + d + 1.0};
    out.objective = J_value(a, b, c, d);
  } else {
    const double c = pos[0], a = pos[1];
    const double b = -1.0 - 2.0 * a - c;
    out.point = {a, b, c};
    out.constraint_residuals = {2.0 * a + b + c + 1.0};
    out.objective = I_value(a, b, c);
  }
  return out;
}

inline bool feasible(Inequality w, const std::vector<double>& p) {
  if (w == Inequality::J) return p[0] < 0.0 && 0.0 < p[1] && p[1] < p[2] && p[2] < p[3];
  return p[1] < 0.0 && 0.0 < p[2] && p[2] < p[0];
}

/// Coordinate-wise golden-section ascent on log-coordinates. Each coordinate
/// moves between its sorted neighbours (or the sampling bounds), so the
/// order pattern is kept. A move is taken only if it improves the objective.
inline std::vector<double> climb(Inequality w, std::vector<double> pos) {
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  auto obj = [w](const std::vector<double>& p) { return complete(w, p).objective; };
  double best = obj(pos);
  const int m = static_cast<int>(pos.size());
  for (int it = 0; it < kClimbIterations; ++it) {
    bool moved = false;
    for (int i = 0; i < m; ++i) {
      double lo = std::log(i == 0 ? kSampleLo : pos[i - 1]);
      double hi = std::log(i == m - 1 ? kSampleHi : pos[i + 1]);
      auto at = [&](double t) {
        auto q = pos;
        q[i] = std::exp(t);
        return obj(q);
      };
      double x1 = hi - phi * (hi - lo);
      double x2 = lo + phi * (hi - lo);
      double f1 = at(x1);
      double f2 = at(x2);
      for (int k = 0; k < 60 && hi - lo > 1e-12; ++k) {
        if (f1 < f2) {
          lo = x1;
          x1 = x2;
          f1 = f2;
          x2 = lo + phi * (hi - lo);
          f2 = at(x2);
        } else {
          hi = x2;
          x2 = x1;
          f2 = f1;
          x1 = hi - phi * (hi - lo);
          f1 = at(x1);
        }
      }
      auto q = pos;
      q[i] = std::exp(f1 >= f2 ? x1 : x2);
      const bool ordered = (i == 0 || q[i - 1] < q[i]) && (i == m - 1 || q[i] < q[i + 1]);
      const double v = obj(q);
      if (ordered && v > best && feasible(w, complete(w, q).point)) {
        pos = std::move(q);
        best = v;
        moved = true;
      }
    }
    if (!moved) break;
  }
  return pos;
}

}  // namespace detail

/// Evaluates the objective at an explicit point, with its constraint residual.
inline ConstraintSample evaluate_point(Inequality w, const std::vector<double>& point) {
  ConstraintSample out;
  out.point = point;
  if (w == Inequality::J) {
    if (point.size() != 4) throw Error(ErrorCode::InvalidArgument, "J takes four coordinates");
    out.objective = J_value(point[0], point[1], point[2], point[3]);
    out.constraint_residuals = {point[0] + point[1] + point[2] + point[3] + 1.0};
  } else {
    if (point.size() != 3) throw Error(ErrorCode::InvalidArgument, "I takes three coordinates");
    out.objective = I_value(point[0], point[1], point[2]);
    out.constraint_residuals = {2.0 * point[0] + point[1] + point[2] + 1.0};
  }
  return out;
}

/// Samples the constraint set and reports the largest objective seen. Every
/// sample that sets a new record is hill-climbed, so for a fixed seed the
/// result is nondecreasing in n_samples.
inline Certificate certify_negative(Inequality w, int n_samples, std::uint64_t seed) {
  if (n_samples < 1) throw Error(ErrorCode::InvalidArgument, "n_samples must be at least 1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> logu(std::log(kSampleLo), std::log(kSampleHi));
  const int m = detail::free_count(w);
  Certificate cert;
  cert.which = w;
  double record = -INFINITY;
  std::vector<double> pos(static_cast<std::size_t>(m));
  for (int i = 0; i < n_samples; ++i) {
    for (auto& p : pos) p = std::exp(logu(rng));
    std::sort(pos.begin(), pos.end());
    ++cert.samples;
    ConstraintSample smp = detail::complete(w, pos);
    if (!detail::feasible(w, smp.point) || !(smp.objective > record)) continue;
    record = smp.objective;
    ++cert.climbs;
    ConstraintSample climbed = detail::complete(w, detail::climb(w, pos));
    if (climbed.objective > cert.max_found) {
      cert.max_found = climbed.objective;
      cert.witness = std::move(climbed);
    }
  }
  return cert;
}

}  // namespace csck
