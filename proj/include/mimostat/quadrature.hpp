#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <type_traits>
#include <vector>

#include "mimostat/common.hpp"

namespace mimostat::quadrature {

enum class TailTransform {
  ExpMatched,  // finite cutoff matched to the exponential decay rate
  Rational,    // x = a + u/(1-u) substitution
};

struct QuadratureSettings {
  double absTol = 1e-12;
  double relTol = 1e-10;
  int maxSubdivisions = 4000;
  TailTransform tail = TailTransform::ExpMatched;

  void validate() const {
    if (!(absTol > 0.0) || !(relTol > 0.0)) throw ContractError("quadrature tolerances must be positive");
    if (maxSubdivisions < 1) throw ContractError("maxSubdivisions must be >= 1");
  }
};

template <class T>
struct IntegralResult {
  T value{};
  double error = 0.0;
  int panels = 0;
  bool converged = false;
};

namespace detail {

// Gauss(7)-Kronrod(15) nodes and weights on [-1,1].
inline constexpr double kGK15Nodes[8] = {
    0.000000000000000000, 0.207784955007898468, 0.405845151377397167, 0.586087235467691130,
    0.741531185599394440, 0.864864423359769073, 0.949107912342758525, 0.991455371120812639};
inline constexpr double kGK15Weights[8] = {
    0.209482141084727828, 0.204432940075298892, 0.190350578064785410, 0.169004726639267903,
    0.140653259715525919, 0.104790010322250184, 0.063092092629978553, 0.022935322010529225};
inline constexpr double kG7Weights[8] = {
    0.417959183673469388, 0.0, 0.381830050505118945, 0.0,
    0.279705391489276668, 0.0, 0.129484966168869693, 0.0};

template <class T>
double absValue(const T& v) {
  if constexpr (std::is_same_v<T, double>) {
    return std::fabs(v);
  } else {
    return std::abs(v);
  }
}

template <class F>
auto gk15(F&& f, double a, double b, double& err) {
  using T = std::decay_t<decltype(f(0.0))>;
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  T k15 = f(mid) * kGK15Weights[0];
  T g7 = f(mid) * kG7Weights[0];
  for (int i = 1; i < 8; ++i) {
    const double dx = half * kGK15Nodes[i];
    T s = f(mid + dx) + f(mid - dx);
    k15 += s * kGK15Weights[i];
    if (kG7Weights[i] != 0.0) g7 += s * kG7Weights[i];
  }
  k15 *= half;
  g7 *= half;
  const double diff = absValue<T>(k15 - g7);
  err = diff * std::sqrt(std::max(diff * 200.0, 0.0));
  err = std::min(err, diff * 200.0);
  return k15;
}

}  // namespace detail

/// Adaptive Gauss-Kronrod integration over a finite interval, with optional
/// caller-provided interior breakpoints seeding the first subdivision.
template <class F>
auto adaptiveGK(F&& f, double a, double b, const QuadratureSettings& settings,
                const std::vector<double>& seeds = {}) {
  using T = std::decay_t<decltype(f(0.0))>;
  settings.validate();
  struct Panel {
    double a, b, err;
    T val;
  };
  std::vector<Panel> panels;
  std::vector<double> pts;
  pts.push_back(a);
  for (double s : seeds)
    if (s > a && s < b) pts.push_back(s);
  pts.push_back(b);
  std::sort(pts.begin(), pts.end());
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    if (pts[i + 1] <= pts[i]) continue;
    Panel p;
    p.a = pts[i];
    p.b = pts[i + 1];
    p.val = detail::gk15(f, p.a, p.b, p.err);
    panels.push_back(p);
  }

  IntegralResult<T> out;
  for (int iter = 0; iter < settings.maxSubdivisions; ++iter) {
    T total{};
    double totalErr = 0.0;
    std::size_t worst = 0;
    double worstErr = -1.0;
    for (std::size_t i = 0; i < panels.size(); ++i) {
      total += panels[i].val;
      totalErr += panels[i].err;
      if (panels[i].err > worstErr) {
        worstErr = panels[i].err;
        worst = i;
      }
    }
    out.value = total;
    out.error = totalErr;
    out.panels = static_cast<int>(panels.size());
    const double goal = std::max(settings.absTol, settings.relTol * detail::absValue<T>(total));
    if (totalErr <= goal) {
      out.converged = true;
      return out;
    }
    Panel& p = panels[worst];
    const double mid = 0.5 * (p.a + p.b);
    if (mid <= p.a || mid >= p.b) {
      out.converged = totalErr <= 10.0 * goal;
      return out;  // interval exhausted at machine precision
    }
    Panel right;
    right.a = mid;
    right.b = p.b;
    right.val = detail::gk15(f, right.a, right.b, right.err);
    p.b = mid;
    p.val = detail::gk15(f, p.a, p.b, p.err);
    panels.push_back(right);
  }
  out.converged = false;
  return out;
}

/// Integral of f over [0, inf) for integrands bounded by
/// exp(-decayRate*x) * (1+x)^powerGrowth. The cutoff is matched to the decay
/// rate so the discarded tail is below the absolute tolerance.
template <class F>
auto integrateExpDecay(F&& f, double decayRate, double powerGrowth, const QuadratureSettings& settings) {
  if (!(decayRate > 0.0)) throw ContractError("integrateExpDecay: decay rate must be positive");
  const double p = std::max(0.0, powerGrowth);
  double target = 45.0;  // exp(-45) ~ 3e-20 of peak
  double L = std::max(1.0, target / decayRate);
  for (int i = 0; i < 5; ++i) L = (target + p * std::log1p(L)) / decayRate;

  if (settings.tail == TailTransform::Rational) {
    // x = u/(1-u) maps [0,1) to [0,inf); integrand vanishes fast enough at u->1
    // that the endpoint evaluation is never reached by the open GK rule.
    auto g = [&](double u) {
      const double w = 1.0 - u;
      const double x = u / w;
      return f(x) / (w * w);
    };
    return adaptiveGK(g, 0.0, 1.0 - 1e-14, settings, {0.5, 0.9, 0.99});
  }

  std::vector<double> seeds;
  double s = std::min(1.0 / decayRate, L) * 0.25;
  for (double x = s; x < L; x *= 2.0) seeds.push_back(x);
  return adaptiveGK(f, 0.0, L, settings, seeds);
}

}  // namespace mimostat::quadrature
