#include "mimostat/ustm.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <cmath>

#include "mimostat/groupcheck.hpp"

namespace mimostat::ustm {

void UstmConfig::validate() const {
  if (nt < 1 || nr < 1) throw ContractError("UstmConfig: antenna counts must be >= 1");
  if (Tcoh < nt) throw ContractError("UstmConfig: coherence length must be >= nt (row isometry must exist)");
  if (T.rows() != nt || T.cols() != nt) throw ContractError("UstmConfig: T must be nt x nt");
  if (!numkit::isHermitian(T)) throw ContractError("UstmConfig: T must be Hermitian");
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(T, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < 0.0) throw ContractError("UstmConfig: T must be positive semidefinite");
}

MappedSpectrum mappedSpectrum(const UstmConfig& cfg, double) {
  cfg.validate();
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(cfg.T, Eigen::EigenvaluesOnly);
  MappedSpectrum out;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    const double Ti = std::max(es.eigenvalues()(i), 0.0);
    out.values.push_back(Ti / (1.0 + Ti));
  }
  out.paddingZeros = cfg.Tcoh - cfg.nt;
  return out;
}

double receivedDensity(const UstmConfig& cfg, const ComplexMatrix& Y, double mergeTol) {
  cfg.validate();
  const int T = cfg.Tcoh;
  if (Y.rows() != cfg.nr || Y.cols() != T) throw ContractError("receivedDensity: Y must be nr x T_coh");

  const MappedSpectrum ms = mappedSpectrum(cfg, mergeTol);
  const int Q = cfg.Q();

  Eigen::SelfAdjointEigenSolver<ComplexMatrix> ey(Y.adjoint() * Y, Eigen::EigenvaluesOnly);
  std::vector<double> y;  // the Q eigenvalues that can be nonzero
  std::vector<double> all(ey.eigenvalues().data(), ey.eigenvalues().data() + ey.eigenvalues().size());
  std::sort(all.begin(), all.end(), std::greater<double>());
  double ySum = 0.0;
  for (int i = 0; i < Q; ++i) {
    y.push_back(std::max(all[i], 0.0));
    ySum += y.back();
  }

  numkit::Nodes rows = numkit::Nodes::fromReal(y, mergeTol);
  rows.appendCluster(Cplx(0.0, 0.0), T - Q);
  numkit::Nodes cols = numkit::Nodes::fromReal(ms.values, mergeTol);
  cols.appendCluster(Cplx(0.0, 0.0), ms.paddingZeros);

  ScaledValue v = numkit::bivariateRatioDet(rows, numkit::expProductKernel(1.0), cols, {});

  // prod_{p=1}^{T-1} p! * e^{-sum y} / (pi^{T nr} det(I+T)^{nr})
  long double logPref = 0.0L;
  for (int p = 1; p <= T - 1; ++p) logPref += std::lgamma(static_cast<long double>(p) + 1.0L);
  logPref -= ySum;
  logPref -= static_cast<long double>(T) * cfg.nr * std::log(M_PIl);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> et(cfg.T, Eigen::EigenvaluesOnly);
  for (Eigen::Index i = 0; i < et.eigenvalues().size(); ++i)
    logPref -= cfg.nr * std::log1p(static_cast<long double>(std::max(et.eigenvalues()(i), 0.0)));

  v.scaleLog(logPref);
  const Cplx out = v.value();
  if (std::fabs(out.imag()) > 1e-8 * (1.0 + std::fabs(out.real())))
    throw NumericError("receivedDensity: non-real value");
  return out.real();
}

double conditionalDensity(const UstmConfig& cfg, const ComplexMatrix& Y, const ComplexMatrix& X) {
  cfg.validate();
  const int T = cfg.Tcoh;
  if (Y.rows() != cfg.nr || Y.cols() != T) throw ContractError("conditionalDensity: Y must be nr x T_coh");
  if (X.rows() != cfg.nt || X.cols() != T) throw ContractError("conditionalDensity: X must be nt x T_coh");
  const ComplexMatrix gram = X * X.adjoint();
  if ((gram - ComplexMatrix::Identity(cfg.nt, cfg.nt)).cwiseAbs().maxCoeff() > 1e-10)
    throw ContractError("conditionalDensity: X must satisfy X X^dagger = I within 1e-10");

  const ComplexMatrix b = ComplexMatrix::Identity(T, T) + X.adjoint() * cfg.T * X;
  const ComplexMatrix sol = Eigen::PartialPivLU<ComplexMatrix>(b).solve(Y.adjoint());
  const double quad = (Y * sol).trace().real();

  // det(I_T + X^dagger T X) = det(I_nt + T) for a row isometry
  long double logNorm = -static_cast<long double>(T) * cfg.nr * std::log(M_PIl);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> et(cfg.T, Eigen::EigenvaluesOnly);
  for (Eigen::Index i = 0; i < et.eigenvalues().size(); ++i)
    logNorm -= cfg.nr * std::log1p(static_cast<long double>(std::max(et.eigenvalues()(i), 0.0)));
  return static_cast<double>(std::exp(logNorm - static_cast<long double>(quad)));
}

ComplexMatrix sampleIsometry(int nt, int Tcoh, std::uint64_t seed, std::uint64_t index) {
  if (Tcoh < nt) throw ContractError("sampleIsometry: need T_coh >= nt");
  SubstreamRng rng(seed, index);
  const ComplexMatrix u = groupcheck::haarUnitary(Tcoh, rng);
  return u.topRows(nt);
}

}  // namespace mimostat::ustm
