#include "mimostat/groupcheck.hpp"

#include "mimostat/specfun.hpp"

#include <Eigen/QR>
#include <algorithm>
#include <cmath>

namespace mimostat::groupcheck {

namespace {

using Int = __int128;

// Fraction-free (Bareiss) integer determinant with row pivoting.
Int integerDet(std::vector<std::vector<Int>> a) {
  const int n = static_cast<int>(a.size());
  if (n == 0) return 1;
  Int sign = 1;
  Int prev = 1;
  for (int k = 0; k + 1 < n; ++k) {
    if (a[k][k] == 0) {
      int p = -1;
      for (int i = k + 1; i < n; ++i)
        if (a[i][k] != 0) {
          p = i;
          break;
        }
      if (p < 0) return 0;
      std::swap(a[k], a[p]);
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i) {
      for (int j = k + 1; j < n; ++j) a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
      a[i][k] = 0;
    }
    prev = a[k][k];
  }
  return sign * a[n - 1][n - 1];
}

Int fallingFactorialInt(int k, int c) {
  Int r = 1;
  for (int j = 0; j < c; ++j) r *= static_cast<Int>(k - j);
  return r;
}

long long toLongLong(Int v, const char* where) {
  if (v > Int(9223372036854775807LL) || v < -Int(9223372036854775807LL)) throw NumericError(std::string(where) + ": integer overflow");
  return static_cast<long long>(v);
}

struct PairBasis {
  std::vector<std::pair<int, int>> pairs;
};

PairBasis symPairs(int n) {
  PairBasis b;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) b.pairs.push_back({i, j});
  return b;
}

PairBasis altPairs(int n) {
  PairBasis b;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) b.pairs.push_back({i, j});
  return b;
}

ComplexMatrix symSquare(const ComplexMatrix& u) {
  const int n = static_cast<int>(u.rows());
  const auto basis = symPairs(n);
  const int d = static_cast<int>(basis.pairs.size());
  const double rt2 = std::sqrt(2.0);
  ComplexMatrix s(d, d);
  for (int col = 0; col < d; ++col) {
    auto [k, l] = basis.pairs[col];
    for (int row = 0; row < d; ++row) {
      auto [p, q] = basis.pairs[row];
      if (k == l && p == q) {
        s(row, col) = u(p, k) * u(p, k);
      } else if (k == l) {
        s(row, col) = rt2 * u(p, k) * u(q, k);
      } else if (p == q) {
        s(row, col) = rt2 * u(p, k) * u(p, l);
      } else {
        s(row, col) = u(p, k) * u(q, l) + u(p, l) * u(q, k);
      }
    }
  }
  return s;
}

ComplexMatrix altSquare(const ComplexMatrix& u) {
  const int n = static_cast<int>(u.rows());
  const auto basis = altPairs(n);
  const int d = static_cast<int>(basis.pairs.size());
  ComplexMatrix s(d, d);
  for (int col = 0; col < d; ++col) {
    auto [k, l] = basis.pairs[col];
    for (int row = 0; row < d; ++row) {
      auto [p, q] = basis.pairs[row];
      s(row, col) = u(p, k) * u(q, l) - u(p, l) * u(q, k);
    }
  }
  return s;
}

std::vector<Cplx> cubicRoots(Cplx c2, Cplx c1, Cplx c0) {
  // roots of x^3 - c2 x^2 + c1 x - c0
  const Cplx a = -c2, b = c1, c = -c0;
  const Cplx p = b - a * a / 3.0;
  const Cplx q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;
  const Cplx disc = q * q / 4.0 + p * p * p / 27.0;
  const Cplx s = std::sqrt(disc);
  Cplx u3 = -q / 2.0 + s;
  if (std::abs(u3) < 1e-30) u3 = -q / 2.0 - s;
  const Cplx u = std::pow(u3, 1.0 / 3.0);
  const Cplx omega(-0.5, std::sqrt(3.0) / 2.0);
  std::vector<Cplx> roots;
  for (int j = 0; j < 3; ++j) {
    const Cplx uj = u * ipow(omega, j);
    Cplx v = (std::abs(uj) < 1e-30) ? Cplx(0.0) : -p / (3.0 * uj);
    roots.push_back(uj + v - a / 3.0);
  }
  return roots;
}

}  // namespace

Representation::Representation(std::vector<int> parts) : m(std::move(parts)) {
  if (m.empty()) throw ContractError("Representation: empty label");
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (m[i] < 0) throw ContractError("Representation: negative part");
    if (i + 1 < m.size() && m[i] < m[i + 1]) throw ContractError("Representation: parts must be nonincreasing");
  }
}

std::vector<int> Representation::k() const {
  std::vector<int> out(m.size());
  const int M = static_cast<int>(m.size());
  for (int i = 1; i <= M; ++i) out[i - 1] = m[i - 1] - i + M;
  return out;
}

long long dimension(const Representation& rep) {
  const int M = rep.M();
  const auto kv = rep.k();
  // rows scaled by k_i! turn 1/(m_i - i + j)! into integer falling factorials
  std::vector<std::vector<Int>> a(M, std::vector<Int>(M, 0));
  for (int i = 0; i < M; ++i) {
    for (int j = 1; j <= M; ++j) {
      const int low = rep.m[i] - (i + 1) + j;
      a[i][j - 1] = (low < 0) ? Int(0) : fallingFactorialInt(kv[i], M - j);
    }
  }
  Int d = integerDet(std::move(a));
  for (int i = 1; i <= M; ++i) {
    Int f = 1;
    for (int j = 2; j <= M - i; ++j) f *= j;
    if (d % f != 0) throw NumericError("dimension: non-integer result");
    d /= f;
  }
  return toLongLong(d, "dimension");
}

long long dimensionVandermonde(const Representation& rep) {
  const int M = rep.M();
  const auto kv = rep.k();
  // k is strictly decreasing, so Delta(k) = (-1)^{M(M-1)/2} * prod_{i<j}(k_i - k_j)
  // and the two sign factors cancel.
  Int num = 1;
  for (int i = 0; i < M; ++i)
    for (int j = i + 1; j < M; ++j) num *= static_cast<Int>(kv[i] - kv[j]);
  for (int i = 1; i <= M; ++i) {
    Int f = 1;
    for (int j = 2; j <= M - i; ++j) f *= j;
    if (num % f != 0) throw NumericError("dimensionVandermonde: non-integer result");
    num /= f;
  }
  return toLongLong(num, "dimensionVandermonde");
}

Cplx weylCharacter(const Representation& rep, const std::vector<Cplx>& eigs, double mergeTol) {
  const int M = rep.M();
  if (static_cast<int>(eigs.size()) != M) throw ContractError("weylCharacter: need M eigenvalues");
  for (const Cplx& a : eigs)
    if (std::abs(a) == 0.0) throw ContractError("weylCharacter: eigenvalues must be nonzero");
  const auto kv = rep.k();
  std::vector<numkit::ColumnFn> cols;
  for (int j = 0; j < M; ++j) {
    const int e = kv[j];
    cols.push_back([e](int order, CplxL a) -> CplxL {
      long double coeff = 1.0L;
      for (int b = 0; b < order; ++b) coeff *= static_cast<long double>(e - b);
      if (coeff == 0.0L) return {0.0L, 0.0L};
      return coeff * ipow(a, e - order);
    });
  }
  return numkit::confluentRatioDet(numkit::Nodes::fromComplex(eigs, mergeTol), cols).value();
}

Cplx weylCharacter(const Representation& rep, const numkit::Spectrum& eigs) {
  std::vector<Cplx> v;
  for (double x : eigs.values) v.push_back(Cplx(x, 0.0));
  return weylCharacter(rep, v, eigs.mergeToleranceUsed);
}

Cplx characterCoefficient(const Representation& rep, Cplx x) {
  const int M = rep.M();
  int total = 0;
  double logRatio = 0.0;
  for (int i = 1; i <= M; ++i) {
    total += rep.m[i - 1];
    logRatio += logFactorial(M - i) - logFactorial(M + rep.m[i - 1] - i);
  }
  return ipow(x, total) * std::exp(logRatio) * static_cast<double>(dimension(rep));
}

std::vector<Representation> representationsUpTo(int M, int cutoff) {
  std::vector<Representation> out;
  std::vector<int> cur(M, 0);
  // enumerate nonincreasing vectors, then order colexicographically
  auto rec = [&](auto&& self, int pos, int maxVal) -> void {
    if (pos == M) {
      out.emplace_back(cur);
      return;
    }
    for (int v = 0; v <= maxVal; ++v) {
      cur[pos] = v;
      self(self, pos + 1, v);
    }
  };
  rec(rec, 0, cutoff);
  std::sort(out.begin(), out.end(), [](const Representation& a, const Representation& b) {
    for (int i = static_cast<int>(a.m.size()) - 1; i >= 0; --i)
      if (a.m[i] != b.m[i]) return a.m[i] < b.m[i];
    return false;
  });
  return out;
}

Cplx schurPolynomial(const std::vector<int>& shape, const std::vector<Cplx>& a) {
  std::vector<int> rows;
  for (int r : shape)
    if (r > 0) rows.push_back(r);
  if (rows.empty()) return {1.0, 0.0};
  const int n = static_cast<int>(a.size());
  std::vector<std::vector<int>> t(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) t[i].assign(rows[i], 0);
  Cplx sum = 0.0;
  // fill cells row-major; rows weakly increase, columns strictly increase
  auto rec = [&](auto&& self, std::size_t r, int c, Cplx mono) -> void {
    if (r == t.size()) {
      sum += mono;
      return;
    }
    std::size_t nr = r;
    int nc = c + 1;
    if (nc >= rows[r]) {
      nr = r + 1;
      nc = 0;
    }
    const int lo = std::max(c > 0 ? t[r][c - 1] : 1, r > 0 && c < rows[r - 1] ? t[r - 1][c] + 1 : 1);
    for (int v = lo; v <= n; ++v) {
      t[r][c] = v;
      self(self, nr, nc, mono * a[v - 1]);
    }
  };
  rec(rec, 0, 0, Cplx(1.0, 0.0));
  return sum;
}

std::vector<Cplx> smallMatrixEigenvalues(const ComplexMatrix& a) {
  const int n = static_cast<int>(a.rows());
  if (a.cols() != n || n < 1 || n > 3) throw ContractError("smallMatrixEigenvalues: dimension must be 1..3");
  if (n == 1) return {a(0, 0)};
  if (n == 2) {
    const Cplx tr = a(0, 0) + a(1, 1);
    const Cplx d = a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
    const Cplx s = std::sqrt(tr * tr - 4.0 * d);
    return {(tr + s) / 2.0, (tr - s) / 2.0};
  }
  const Cplx c2 = a.trace();
  const Cplx c1 = (a.trace() * a.trace() - (a * a).trace()) / 2.0;
  const Cplx c0 = a.determinant();
  return cubicRoots(c2, c1, c0);
}

double expansionResidual(const ComplexMatrix& a, Cplx x, int cutoff) {
  const int M = static_cast<int>(a.rows());
  if (M > 3) throw ContractError("expansionResidual: intended for M <= 3");
  const Cplx target = std::exp(x * a.trace());
  if (std::abs(x) == 0.0) return std::abs(target - Cplx(1.0, 0.0));
  const auto eigs = smallMatrixEigenvalues(a);
  Cplx sum = 0.0;
  for (const auto& rep : representationsUpTo(M, cutoff)) sum += characterCoefficient(rep, x) * weylCharacter(rep, eigs);
  return std::abs(target - sum);
}

double cauchyBinetResidual(const std::vector<double>& a, const std::vector<double>& b, CauchyBinetWeight w,
                           int cutoff) {
  const int M = static_cast<int>(a.size());
  if (static_cast<int>(b.size()) != M) throw ContractError("cauchyBinetResidual: vectors must match in length");

  auto weight = [w](int k) -> double {
    switch (w) {
      case CauchyBinetWeight::InvFactorial:
        return std::exp(-logFactorial(k));
      case CauchyBinetWeight::AltInvFactorial:
        return (k % 2 == 0 ? 1.0 : -1.0) * std::exp(-logFactorial(k));
      case CauchyBinetWeight::InvFactorialSq:
        return std::exp(-2.0 * logFactorial(k));
    }
    return 0.0;
  };

  auto minorDet = [M](const std::vector<double>& v, const std::vector<int>& k) {
    Eigen::MatrixXd m(M, M);
    for (int i = 0; i < M; ++i)
      for (int j = 0; j < M; ++j) m(i, j) = std::pow(v[i], k[j]);
    return m.determinant();
  };

  double sum = 0.0;
  std::vector<int> k(M);
  // strictly decreasing tuples with k_1 <= cutoff
  auto rec = [&](auto&& self, int pos, int maxv) -> void {
    if (pos == M) {
      double wp = 1.0;
      for (int v : k) wp *= weight(v);
      sum += minorDet(a, k) * minorDet(b, k) * wp;
      return;
    }
    for (int v = maxv; v >= M - 1 - pos; --v) {
      k[pos] = v;
      self(self, pos + 1, v - 1);
    }
  };
  rec(rec, 0, cutoff);

  Eigen::MatrixXd full(M, M);
  for (int i = 0; i < M; ++i)
    for (int j = 0; j < M; ++j) {
      const double z = a[i] * b[j];
      switch (w) {
        case CauchyBinetWeight::InvFactorial:
          full(i, j) = std::exp(z);
          break;
        case CauchyBinetWeight::AltInvFactorial:
          full(i, j) = std::exp(-z);
          break;
        case CauchyBinetWeight::InvFactorialSq:
          if (z < 0.0) throw ContractError("cauchyBinetResidual: I0 weight needs nonnegative products");
          full(i, j) = specfun::besselI0(2.0 * std::sqrt(z));
          break;
      }
    }
  return std::abs(sum - full.determinant());
}

ComplexMatrix haarUnitary(int M, SubstreamRng& rng) {
  ComplexMatrix g(M, M);
  for (int i = 0; i < M; ++i)
    for (int j = 0; j < M; ++j) g(i, j) = rng.complexGaussian();
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ();
  ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < M; ++j) {
    Cplx d = r(j, j);
    const double m = std::abs(d);
    q.col(j) *= (m == 0.0) ? Cplx(1.0, 0.0) : d / m;
  }
  return q;
}

ComplexMatrix representationMatrix(const Representation& rep, const ComplexMatrix& u) {
  const int M = static_cast<int>(u.rows());
  if (rep.M() != M) throw ContractError("representationMatrix: label length must match matrix dimension");
  const int twist = rep.m.back();
  std::vector<int> base(rep.m);
  for (int& v : base) v -= twist;
  Cplx detPow(1.0, 0.0);
  if (twist > 0) detPow = ipow(u.determinant(), twist);

  auto isZero = [&]() {
    for (int v : base)
      if (v != 0) return false;
    return true;
  };
  auto matches = [&](std::initializer_list<int> pat) {
    if (static_cast<int>(pat.size()) > M) return false;
    int i = 0;
    for (int v : pat)
      if (base[i++] != v) return false;
    for (; i < M; ++i)
      if (base[i] != 0) return false;
    return true;
  };

  if (isZero()) {
    ComplexMatrix one(1, 1);
    one(0, 0) = detPow;
    return one;
  }
  if (matches({1})) return detPow * u;
  if (matches({2})) return detPow * symSquare(u);
  if (M >= 2 && matches({1, 1})) return detPow * altSquare(u);
  throw ContractError("representationMatrix: label outside the constructible family (m_1 <= 2 patterns)");
}

HaarResidual haarOrthogonalityResidual(const Representation& repA, const Representation& repB, int M,
                                       long long samples, std::uint64_t seed) {
  if (samples < 2) throw ContractError("haarOrthogonalityResidual: need at least 2 samples");
  SubstreamRng rng(seed, 0);
  const bool same = repA == repB;
  const double dA = static_cast<double>(dimension(repA));

  ComplexMatrix u = haarUnitary(M, rng);
  ComplexMatrix ma = representationMatrix(repA, u);
  ComplexMatrix mb = same ? ma : representationMatrix(repB, u);
  const int da = static_cast<int>(ma.rows());
  const int db = static_cast<int>(mb.rows());
  const std::size_t entries = static_cast<std::size_t>(da) * da * db * db;
  std::vector<Cplx> mean(entries, Cplx(0.0, 0.0));
  std::vector<double> m2(entries, 0.0);

  for (long long s = 0; s < samples; ++s) {
    if (s > 0) {
      u = haarUnitary(M, rng);
      ma = representationMatrix(repA, u);
      mb = same ? ma : representationMatrix(repB, u);
    }
    std::size_t idx = 0;
    const double invn = 1.0 / static_cast<double>(s + 1);
    for (int i = 0; i < da; ++i)
      for (int j = 0; j < da; ++j)
        for (int k = 0; k < db; ++k)
          for (int l = 0; l < db; ++l, ++idx) {
            const Cplx v = ma(i, j) * std::conj(mb(k, l));
            const Cplx delta = v - mean[idx];
            mean[idx] += delta * invn;
            m2[idx] += std::norm(delta) * static_cast<double>(s) * invn;
          }
  }

  HaarResidual out;
  std::size_t idx = 0;
  for (int i = 0; i < da; ++i)
    for (int j = 0; j < da; ++j)
      for (int k = 0; k < db; ++k)
        for (int l = 0; l < db; ++l, ++idx) {
          Cplx expected(0.0, 0.0);
          if (same && i == k && j == l) expected = Cplx(1.0 / dA, 0.0);
          const double resid = std::abs(mean[idx] - expected);
          if (resid >= out.maxResidual) {
            out.maxResidual = resid;
            out.stderrAtMax = std::sqrt(m2[idx] / static_cast<double>(samples - 1) / static_cast<double>(samples));
          }
        }
  return out;
}

}  // namespace mimostat::groupcheck
