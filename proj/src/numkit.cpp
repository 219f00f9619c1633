#include "mimostat/numkit.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <algorithm>
#include <numeric>

namespace mimostat::numkit {

Spectrum Spectrum::fromValues(std::vector<double> v, double mergeTol) {
  Spectrum s;
  std::sort(v.begin(), v.end(), std::greater<double>());
  s.values = std::move(v);
  s.mergeToleranceUsed = mergeTol;
  double scale = 0.0;
  for (double x : s.values) scale = std::max(scale, std::fabs(x));
  const double tol = mergeTol * std::max(scale, 1e-300);
  std::size_t i = 0;
  while (i < s.values.size()) {
    std::size_t j = i;
    double sum = 0.0;
    // group adjacent values while they stay within tol of the group's front
    while (j < s.values.size() && std::fabs(s.values[j] - s.values[i]) <= tol) {
      sum += s.values[j];
      ++j;
    }
    s.clusters.push_back({sum / static_cast<double>(j - i), static_cast<int>(j - i)});
    i = j;
  }
  return s;
}

double vandermonde(std::span<const double> x) {
  double p = 1.0;
  for (std::size_t i = 1; i < x.size(); ++i)
    for (std::size_t j = 0; j < i; ++j) p *= x[i] - x[j];
  return p;
}

Cplx vandermonde(std::span<const Cplx> x) {
  Cplx p = 1.0;
  for (std::size_t i = 1; i < x.size(); ++i)
    for (std::size_t j = 0; j < i; ++j) p *= x[i] - x[j];
  return p;
}

Cplx det(const ComplexMatrix& a) {
  if (a.rows() != a.cols()) throw ContractError("det: matrix must be square");
  if (a.rows() == 0) return {1.0, 0.0};
  return Eigen::PartialPivLU<ComplexMatrix>(a).determinant();
}

ScaledValue detScaled(MatrixL m) {
  const Eigen::Index n = m.rows();
  if (n != m.cols()) throw ContractError("detScaled: matrix must be square");
  if (n == 0) return ScaledValue::one();
  ScaledValue out = ScaledValue::one();
  for (Eigen::Index c = 0; c < n; ++c) {
    long double s = 0.0L;
    for (Eigen::Index r = 0; r < n; ++r) s = std::max(s, std::abs(m(r, c)));
    if (s == 0.0L) return ScaledValue::of(CplxL(0.0L, 0.0L));
    m.col(c) /= s;
    out.scaleLog(std::log(s));
  }
  const CplxL d = Eigen::PartialPivLU<MatrixL>(m).determinant();
  out *= ScaledValue::of(d);
  return out;
}

bool isHermitian(const ComplexMatrix& a, double relTol) {
  if (a.rows() != a.cols()) return false;
  const double scale = std::max(a.cwiseAbs().maxCoeff(), 1e-300);
  return (a - a.adjoint()).cwiseAbs().maxCoeff() <= relTol * scale * a.rows();
}

Spectrum hermitianEigenvalues(const ComplexMatrix& a, double mergeTol) {
  if (a.rows() != a.cols()) throw ContractError("hermitianEigenvalues: matrix must be square");
  if (!isHermitian(a)) throw ContractError("hermitianEigenvalues: matrix is not Hermitian");
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(a);
  if (solver.info() != Eigen::Success) throw NumericError("hermitianEigenvalues: eigensolver failed");
  const Eigen::VectorXd ev = solver.eigenvalues();
  const double norm = std::max(a.norm(), 1e-300);
  const double resid = (a - solver.eigenvectors() * ev.asDiagonal() * solver.eigenvectors().adjoint()).norm();
  if (resid > 1e-10 * norm) throw NumericError("hermitianEigenvalues: reconstruction residual too large");
  std::vector<double> vals(ev.data(), ev.data() + ev.size());
  for (std::size_t i = 0; i < vals.size(); ++i) {
    if (!(vals[i] > 0.0))
      throw NumericError("hermitianEigenvalues: non-positive eigenvalue at index " + std::to_string(i) +
                         " (value " + std::to_string(vals[i]) + ")");
  }
  return Spectrum::fromValues(std::move(vals), mergeTol);
}

int Nodes::dim() const {
  int d = 0;
  for (const auto& c : clusters) d += c.multiplicity;
  return d;
}

Nodes Nodes::fromComplex(std::span<const Cplx> values, double mergeTol) {
  Nodes n;
  long double scale = 0.0L;
  for (const Cplx& v : values) scale = std::max<long double>(scale, std::abs(CplxL(v)));
  const long double tol = static_cast<long double>(mergeTol) * std::max(scale, 1e-300L);
  for (const Cplx& v : values) {
    const CplxL vl(v);
    bool merged = false;
    for (auto& c : n.clusters) {
      if (std::abs(c.value - vl) <= tol) {
        // representative tracks the running mean of the group
        c.value = (c.value * static_cast<long double>(c.multiplicity) + vl) /
                  static_cast<long double>(c.multiplicity + 1);
        ++c.multiplicity;
        merged = true;
        break;
      }
    }
    if (!merged) n.clusters.push_back({vl, 1});
  }
  return n;
}

Nodes Nodes::fromReal(std::span<const double> values, double mergeTol) {
  std::vector<Cplx> v(values.begin(), values.end());
  return fromComplex(v, mergeTol);
}

Nodes Nodes::fromSpectrum(const Spectrum& s) {
  Nodes n;
  for (const auto& c : s.clusters) n.clusters.push_back({CplxL(c.value, 0.0L), c.multiplicity});
  return n;
}

void Nodes::appendCluster(Cplx value, int multiplicity) {
  if (multiplicity <= 0) return;
  clusters.push_back({CplxL(value), multiplicity});
}

ScaledValue confluentVandermonde(const Nodes& nodes) {
  ScaledValue v = ScaledValue::one();
  const auto& cl = nodes.clusters;
  for (std::size_t l = 1; l < cl.size(); ++l) {
    for (std::size_t k = 0; k < l; ++k) {
      const CplxL diff = cl[l].value - cl[k].value;
      const long double mag = std::abs(diff);
      if (mag == 0.0L) throw NumericError("confluentVandermonde: distinct clusters share a value");
      const long double e = static_cast<long double>(cl[k].multiplicity) * cl[l].multiplicity;
      v.mantissa *= ipow(diff / mag, cl[k].multiplicity * cl[l].multiplicity);
      v.scaleLog(e * std::log(mag));
      v.normalize();
    }
  }
  for (const auto& c : cl) v.scaleLog(logSuperfactorial(c.multiplicity));
  return v;
}

ScaledValue confluentRatioDet(const Nodes& rows, const std::vector<ColumnFn>& cols) {
  const int n = rows.dim();
  if (static_cast<int>(cols.size()) != n)
    throw ContractError("confluentRatioDet: column count must equal node dimension");
  if (n == 0) return ScaledValue::one();
  MatrixL m(n, n);
  int r = 0;
  for (const auto& cl : rows.clusters) {
    for (int a = 0; a < cl.multiplicity; ++a, ++r) {
      for (int c = 0; c < n; ++c) m(r, c) = cols[c](a, cl.value);
    }
  }
  ScaledValue d = detScaled(std::move(m));
  d.divideBy(confluentVandermonde(rows));
  return d;
}

ScaledValue bivariateRatioDet(const Nodes& rows, const Kernel2& kernel, const Nodes& xNodes,
                              const std::vector<ColumnFn>& extras) {
  std::vector<ColumnFn> cols;
  for (const auto& xc : xNodes.clusters) {
    for (int b = 0; b < xc.multiplicity; ++b) {
      const CplxL xv = xc.value;
      cols.push_back([&kernel, b, xv](int a, CplxL t) { return kernel(a, b, t, xv); });
    }
  }
  for (const auto& e : extras) cols.push_back(e);
  ScaledValue d = confluentRatioDet(rows, cols);
  d.divideBy(confluentVandermonde(xNodes));
  return d;
}

Kernel2 expProductKernel(double sign) {
  const long double s = sign;
  return [s](int a, int b, CplxL t, CplxL x) -> CplxL {
    const CplxL e = std::exp(s * t * x);
    CplxL sum = 0.0L;
    for (int k = 0; k <= std::min(a, b); ++k) {
      long double binomAK = 1.0L;
      for (int j = 1; j <= k; ++j) binomAK *= static_cast<long double>(a - k + j) / j;
      long double fallBK = 1.0L;
      for (int j = 0; j < k; ++j) fallBK *= static_cast<long double>(b - j);
      if (k > 0 && fallBK == 0.0L) continue;
      sum += binomAK * fallBK * ipow(s, a + b - k) * ipow(t, b - k) * ipow(x, a - k);
    }
    return sum * e;
  };
}

ColumnFn monomialColumn(int power, CplxL coeff) {
  return [power, coeff](int order, CplxL t) -> CplxL {
    long double fall = 1.0L;
    for (int j = 0; j < order; ++j) fall *= static_cast<long double>(power - j);
    if (fall == 0.0L) return {0.0L, 0.0L};
    return coeff * fall * ipow(t, power - order);
  };
}

ConfluentRatioProblem ConfluentRatioProblem::fromRealNodes(std::vector<ColumnFn> fns,
                                                           std::span<const double> nodeValues, double mergeTol) {
  ConfluentRatioProblem p;
  p.columnFunctions = std::move(fns);
  p.nodes = Nodes::fromReal(nodeValues, mergeTol);
  return p;
}

Cplx confluentRatio(const ConfluentRatioProblem& p) {
  if (static_cast<int>(p.columnFunctions.size()) != p.nodes.dim())
    throw ContractError("confluentRatio: need one column function per node");
  return confluentRatioDet(p.nodes, p.columnFunctions).value();
}

Cplx asymptoticRatio(const ConfluentRatioProblem& p, const std::vector<std::vector<Cplx>>& tailCoefficients) {
  const int total = static_cast<int>(p.columnFunctions.size());
  const int finite = p.nodes.dim();
  const int inf = total - finite;
  if (inf < 0) throw ContractError("asymptoticRatio: more nodes than functions");
  if (inf == 0) return confluentRatio(p);
  if (static_cast<int>(tailCoefficients.size()) != total)
    throw ContractError("asymptoticRatio: one tail-coefficient list per function required");
  for (const auto& t : tailCoefficients)
    if (static_cast<int>(t.size()) < inf) throw ContractError("asymptoticRatio: insufficient tail coefficients");

  // Columns: finite nodes first, then tail-coefficient columns in order
  // (inf-1, ..., 0). This ordering is the literal limit of det/Delta with the
  // diverging nodes in the trailing positions, so no sign correction is needed.
  const int n = total;
  MatrixL m(n, n);
  int col = 0;
  for (const auto& cl : p.nodes.clusters) {
    for (int b = 0; b < cl.multiplicity; ++b, ++col) {
      for (int i = 0; i < n; ++i) m(i, col) = p.columnFunctions[i](b, cl.value);
    }
  }
  for (int k = inf - 1; k >= 0; --k, ++col) {
    for (int i = 0; i < n; ++i) m(i, col) = CplxL(tailCoefficients[i][k]);
  }
  ScaledValue d = detScaled(std::move(m));
  d.divideBy(confluentVandermonde(p.nodes));
  return d.value();
}

}  // namespace mimostat::numkit
