#pragma once

// Test-only oracles, independent of the implementation paths they check.

#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include "mimostat/common.hpp"

namespace oracles {

using mimostat::Cplx;

// Determinant by cofactor expansion (n <= 6).
inline Cplx cofactorDet(const std::vector<std::vector<Cplx>>& a) {
  const std::size_t n = a.size();
  if (n == 0) return {1.0, 0.0};
  if (n == 1) return a[0][0];
  Cplx sum = 0.0;
  for (std::size_t c = 0; c < n; ++c) {
    std::vector<std::vector<Cplx>> minor(n - 1, std::vector<Cplx>(n - 1));
    for (std::size_t i = 1; i < n; ++i) {
      std::size_t jj = 0;
      for (std::size_t j = 0; j < n; ++j) {
        if (j == c) continue;
        minor[i - 1][jj++] = a[i][j];
      }
    }
    const double sign = (c % 2 == 0) ? 1.0 : -1.0;
    sum += sign * a[0][c] * cofactorDet(minor);
  }
  return sum;
}

// Plain det[f_i(x_j)]/Delta(x) at separated nodes, in long double so the
// near-coincident oracle evaluations keep enough digits.
inline long double plainRatioL(const std::vector<std::function<long double(long double)>>& fns,
                               const std::vector<long double>& nodes) {
  const int n = static_cast<int>(nodes.size());
  std::vector<std::vector<long double>> m(n, std::vector<long double>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m[i][j] = fns[i](nodes[j]);
  // Gaussian elimination with partial pivoting
  long double det = 1.0L;
  for (int k = 0; k < n; ++k) {
    int p = k;
    for (int i = k + 1; i < n; ++i)
      if (std::fabs((double)m[i][k]) > std::fabs((double)m[p][k])) p = i;
    if (p != k) {
      std::swap(m[p], m[k]);
      det = -det;
    }
    det *= m[k][k];
    if (m[k][k] == 0.0L) return 0.0L;
    for (int i = k + 1; i < n; ++i) {
      const long double f = m[i][k] / m[k][k];
      for (int j = k; j < n; ++j) m[i][j] -= f * m[k][j];
    }
  }
  long double delta = 1.0L;
  for (int i = 1; i < n; ++i)
    for (int j = 0; j < i; ++j) delta *= nodes[i] - nodes[j];
  return det / delta;
}

// Richardson extrapolation of plainRatio toward a coincident-node limit:
// clusters listed as (value, multiplicity); separation h staggers the
// cluster members as v, v+h, v+2h, ...
inline long double confluentOracle(const std::vector<std::function<long double(long double)>>& fns,
                                   const std::vector<std::pair<long double, int>>& clusters,
                                   const std::vector<long double>& hs) {
  auto ratioAt = [&](long double h) {
    std::vector<long double> nodes;
    for (const auto& [v, mult] : clusters)
      for (int k = 0; k < mult; ++k) nodes.push_back(v + h * k);
    return plainRatioL(fns, nodes);
  };
  std::vector<long double> r;
  for (long double h : hs) r.push_back(ratioAt(h));
  // error is O(h): iterated Richardson assuming hs halve each step
  std::vector<long double> cur = r;
  int level = 1;
  while (cur.size() > 1) {
    std::vector<long double> next;
    const long double w = std::pow(2.0L, level);
    for (std::size_t i = 0; i + 1 < cur.size(); ++i) next.push_back((w * cur[i + 1] - cur[i]) / (w - 1.0L));
    cur = std::move(next);
    ++level;
  }
  return cur[0];
}

}  // namespace oracles
