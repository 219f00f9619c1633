#include "mimostat/eigdens.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

#include "mimostat/specfun.hpp"

namespace mimostat::eigdens {

namespace {

double applySignHook(double v) { return testhooks::densitySignFlip.load() ? -v : v; }

void checkArgs(std::span<const double> lambda, int N) {
  if (static_cast<int>(lambda.size()) != N) throw ContractError("JointDensity: need exactly N eigenvalue arguments");
  for (double l : lambda)
    if (!(l > 0.0)) throw ContractError("JointDensity: eigenvalue arguments must be positive");
}

double logSelbergNorm(int M, int N) {
  // log C_{M,N}; C_{M,N}^{-1} = prod_{j=1}^N Gamma(j+1) Gamma(M-N+j)
  double s = 0.0;
  for (int j = 1; j <= N; ++j) s += std::lgamma(j + 1.0) + std::lgamma(static_cast<double>(M - N + j));
  return -s;
}

double logVandermondeSq(std::span<const double> lambda) {
  double s = 0.0;
  for (std::size_t i = 1; i < lambda.size(); ++i)
    for (std::size_t j = 0; j < i; ++j) {
      const double d = std::fabs(lambda[i] - lambda[j]);
      if (d == 0.0) return -std::numeric_limits<double>::infinity();
      s += 2.0 * std::log(d);
    }
  return s;
}

double finishReal(ScaledValue v, const char* where) {
  const Cplx c = v.value();
  if (!std::isfinite(c.real())) throw NumericError(std::string(where) + ": non-finite density value");
  if (std::fabs(c.imag()) > 1e-8 * (1.0 + std::fabs(c.real())))
    throw NumericError(std::string(where) + ": density has a non-real value");
  return applySignHook(c.real());
}

}  // namespace

JointDensity densityIid(int nt, int nr) {
  if (nt < 1 || nr < 1) throw ContractError("densityIid: antenna counts must be >= 1");
  JointDensity d;
  d.spec = ChannelSpec::makeIid(nt, nr);
  d.N = std::min(nt, nr);
  const int M = std::max(nt, nr);
  const int N = d.N;
  const double logC = logSelbergNorm(M, N);
  d.evaluator = [logC, M, N](std::span<const double> lambda) -> double {
    checkArgs(lambda, N);
    double logv = logC + logVandermondeSq(lambda);
    for (double l : lambda) logv += (M - N) * std::log(l) - l;
    return applySignHook(std::isfinite(logv) ? std::exp(logv) : 0.0);
  };
  return d;
}

JointDensity densitySemiCorr(const ComplexMatrix& T, int nt, int nr, double mergeTol,
                             const quadrature::QuadratureSettings& qs) {
  (void)qs;
  if (T.rows() != nt || T.cols() != nt) throw ContractError("densitySemiCorr: T must be nt x nt");
  JointDensity d;
  d.spec = ChannelSpec::makeSemiCorrelated(T, nr);
  const int M = std::max(nt, nr);
  const int N = std::min(nt, nr);
  d.N = N;

  const auto [tSpec, rUnit] = channels::invEigs(d.spec, mergeTol);
  const numkit::Nodes tNodes = numkit::Nodes::fromSpectrum(tSpec);
  double logPref = logSelbergNorm(M, N);
  for (int i = 1; i <= nt; ++i) logPref += std::lgamma(static_cast<double>(i));
  for (double t : tSpec.values) logPref += nr * std::log(t);
  // sign from the character-expansion resummation; the zero-padding limit for
  // nt > nr is taken by the engine itself, which keeps the composed sign
  // consistent (the collapsed printed form differs by (-1)^{nr (nt-nr)}).
  const double sign = ((static_cast<long long>(nt) * (nt - 1) / 2) % 2 == 0) ? 1.0 : -1.0;

  d.evaluator = [tNodes, logPref, sign, M, N, nt, nr, mergeTol](std::span<const double> lambda) -> double {
    checkArgs(lambda, N);
    numkit::Nodes xNodes = numkit::Nodes::fromReal(lambda, mergeTol);
    xNodes.appendCluster(Cplx(0.0, 0.0), nt - N);
    const ScaledValue ratio = numkit::bivariateRatioDet(tNodes, numkit::expProductKernel(-1.0), xNodes, {});
    double logv = logPref + logVandermondeSq(lambda);
    for (double l : lambda) logv += (M - N) * std::log(l);
    ScaledValue v = ratio;
    v.scaleLog(static_cast<long double>(logv));
    v *= CplxL(sign, 0.0L);
    return finishReal(v, "densitySemiCorr");
  };
  return d;
}

JointDensity densityNonzeroMean(const ComplexMatrix& G0, int nt, int nr, double mergeTol) {
  if (G0.rows() != nr || G0.cols() != nt) throw ContractError("densityNonzeroMean: G0 must be nr x nt");
  JointDensity d;
  d.spec = ChannelSpec::makeNonzeroMean(G0);
  const int M = std::max(nt, nr);
  const int N = std::min(nt, nr);
  d.N = N;

  // P = (1/N!) Delta(lambda) det[h_nu(gamma_i, lambda_j)] / Delta(gamma)
  //         * exp(-sum lambda - sum gamma),
  // with h_nu(g,l) = sum_k g^k l^{k+nu} / (k! (k+nu)!) = (l/g)^{nu/2} I_nu(2 sqrt(g l))
  // and nu = M - N. The Bessel order tracks the antenna-count difference; at
  // M = N this is the printed I_0 determinant, and as gamma -> 0 it collapses
  // to the zero-mean density. Rank-deficient means enter through zero gammas
  // handled by the confluent limit. The nonnegativity, normalization and
  // Monte Carlo invariants arbitrate this form.
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(G0.adjoint() * G0, Eigen::EigenvaluesOnly);
  std::vector<double> gamma;
  const double gmax = std::max(es.eigenvalues().maxCoeff(), 0.0);
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    const double g = es.eigenvalues()(i);
    if (g > 1e-12 * std::max(gmax, 1.0)) gamma.push_back(g);
  }
  const int N0 = static_cast<int>(gamma.size());
  numkit::Nodes gNodes = numkit::Nodes::fromReal(gamma, mergeTol);
  gNodes.appendCluster(Cplx(0.0, 0.0), N - N0);

  double logPref = -logFactorial(N);
  for (double g : gamma) logPref -= g;
  const int nu = M - N;

  d.evaluator = [gNodes, logPref, nu, N, mergeTol](std::span<const double> lambda) -> double {
    checkArgs(lambda, N);
    const numkit::Nodes xNodes = numkit::Nodes::fromReal(lambda, mergeTol);
    numkit::Kernel2 bessel = [nu](int a, int b, CplxL t, CplxL x) {
      return specfun::besselOrderMixedPartial(nu, a, b, t, x);
    };
    const ScaledValue ratio = numkit::bivariateRatioDet(gNodes, bessel, xNodes, {});
    double logv = logPref + logVandermondeSq(lambda);
    for (double l : lambda) logv -= l;
    ScaledValue v = ratio;
    v.scaleLog(static_cast<long double>(logv));
    return finishReal(v, "densityNonzeroMean");
  };
  return d;
}

JointDensity densityFor(const ChannelSpec& spec, double mergeTol) {
  switch (spec.kind) {
    case channels::ChannelKind::Iid:
      return densityIid(spec.nt, spec.nr);
    case channels::ChannelKind::SemiCorrelated:
      return densitySemiCorr(spec.T, spec.nt, spec.nr, mergeTol);
    case channels::ChannelKind::NonzeroMean:
      return densityNonzeroMean(spec.G0, spec.nt, spec.nr, mergeTol);
    case channels::ChannelKind::FullyCorrelated:
      throw ContractError(
          "densityFor: the doubly correlated ensemble has no closed-form joint eigenvalue density here; "
          "use the moment-generating-function pathway (mgfcap) instead");
  }
  throw ContractError("densityFor: unknown variant");
}

}  // namespace mimostat::eigdens
