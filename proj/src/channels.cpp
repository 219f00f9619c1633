#include "mimostat/channels.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

namespace mimostat::channels {

namespace {

void requireHermitianPd(const ComplexMatrix& a, const char* name, int expectDim = -1) {
  if (a.rows() != a.cols()) throw ContractError(std::string(name) + " must be square");
  if (expectDim >= 0 && a.rows() != expectDim) throw ContractError(std::string(name) + " has the wrong dimension");
  if (!numkit::isHermitian(a)) throw ContractError(std::string(name) + " must be Hermitian");
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(a, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() <= 0.0) throw ContractError(std::string(name) + " must be positive definite");
}

ComplexMatrix hermitianSqrt(const ComplexMatrix& a) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(a);
  Eigen::VectorXd ev = es.eigenvalues();
  for (Eigen::Index i = 0; i < ev.size(); ++i) ev(i) = std::sqrt(std::max(ev(i), 0.0));
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace

ComplexMatrix correlationMatrix(const ArrayGeometry& geom) {
  geom.validate();
  const int n = geom.antennaCount;
  const double delta = geom.deltaDeg;
  const double norm = 1.0 / std::sqrt(2.0 * M_PI * delta * delta);
  ComplexMatrix t(n, n);
  // Toeplitz: entries depend on a-b only; one integral per offset.
  for (int off = 0; off < n; ++off) {
    auto f = [&](double phi) -> Cplx {
      const double phase = 2.0 * M_PI * off * geom.dLambda * std::sin(phi * M_PI / 180.0);
      const double w = std::exp(-phi * phi / (2.0 * delta * delta));
      return Cplx(std::cos(phase), std::sin(phase)) * w;
    };
    // fixed composite seed grid + adaptive refinement
    std::vector<double> seeds;
    seeds.reserve(2001);
    for (int k = 1; k < 2001; ++k) seeds.push_back(-180.0 + 360.0 * k / 2001.0);
    quadrature::QuadratureSettings qs;
    qs.absTol = 1e-13;
    qs.relTol = 1e-12;
    auto res = quadrature::adaptiveGK(f, -180.0, 180.0, qs, seeds);
    if (!res.converged)
      throw NumericError("correlationMatrix: quadrature failed for offset pair (a-b=" + std::to_string(off) + ")");
    const Cplx val = res.value * norm;
    for (int a = 0; a + off < n; ++a) {
      t(a, a + off) = std::conj(val);
      t(a + off, a) = val;
    }
  }
  return t;
}

ChannelSpec ChannelSpec::makeIid(int nt, int nr) {
  if (nt < 1 || nr < 1) throw ContractError("ChannelSpec: antenna counts must be >= 1");
  ChannelSpec s;
  s.kind = ChannelKind::Iid;
  s.nt = nt;
  s.nr = nr;
  return s;
}

ChannelSpec ChannelSpec::makeSemiCorrelated(ComplexMatrix T, int nr) {
  if (nr < 1) throw ContractError("ChannelSpec: antenna counts must be >= 1");
  requireHermitianPd(T, "T");
  ChannelSpec s;
  s.kind = ChannelKind::SemiCorrelated;
  s.nt = static_cast<int>(T.rows());
  s.nr = nr;
  s.T = std::move(T);
  return s;
}

ChannelSpec ChannelSpec::makeNonzeroMean(ComplexMatrix G0) {
  if (G0.rows() < 1 || G0.cols() < 1) throw ContractError("ChannelSpec: G0 must be nonempty");
  ChannelSpec s;
  s.kind = ChannelKind::NonzeroMean;
  s.nr = static_cast<int>(G0.rows());
  s.nt = static_cast<int>(G0.cols());
  s.G0 = std::move(G0);
  return s;
}

ChannelSpec ChannelSpec::makeFullyCorrelated(ComplexMatrix T, ComplexMatrix R) {
  requireHermitianPd(T, "T");
  requireHermitianPd(R, "R");
  ChannelSpec s;
  s.kind = ChannelKind::FullyCorrelated;
  s.nt = static_cast<int>(T.rows());
  s.nr = static_cast<int>(R.rows());
  s.T = std::move(T);
  s.R = std::move(R);
  return s;
}

std::pair<Spectrum, Spectrum> invEigs(const ChannelSpec& spec, double mergeTol) {
  auto invertSpectrum = [mergeTol](const ComplexMatrix& m) {
    Spectrum direct = numkit::hermitianEigenvalues(m, mergeTol);
    std::vector<double> inv;
    inv.reserve(direct.values.size());
    for (double v : direct.values) {
      if (!(v > 0.0)) throw NumericError("invEigs: singular correlation matrix");
      inv.push_back(1.0 / v);
    }
    return Spectrum::fromValues(std::move(inv), mergeTol);
  };
  switch (spec.kind) {
    case ChannelKind::SemiCorrelated:
      return {invertSpectrum(spec.T), Spectrum::fromValues(std::vector<double>(spec.nr, 1.0), mergeTol)};
    case ChannelKind::FullyCorrelated:
      return {invertSpectrum(spec.T), invertSpectrum(spec.R)};
    default:
      throw ContractError("invEigs: correlated variants only");
  }
}

ChannelSampler::ChannelSampler(const ChannelSpec& spec) : spec_(spec) {
  if (spec.kind == ChannelKind::SemiCorrelated || spec.kind == ChannelKind::FullyCorrelated)
    sqrtT_ = hermitianSqrt(spec.T);
  if (spec.kind == ChannelKind::FullyCorrelated) sqrtR_ = hermitianSqrt(spec.R);
}

ComplexMatrix ChannelSampler::draw(std::uint64_t seed, std::uint64_t index) const {
  SubstreamRng rng(seed, index);
  ComplexMatrix w(spec_.nr, spec_.nt);
  for (int r = 0; r < spec_.nr; ++r)
    for (int c = 0; c < spec_.nt; ++c) w(r, c) = rng.complexGaussian();
  switch (spec_.kind) {
    case ChannelKind::Iid:
      return w;
    case ChannelKind::SemiCorrelated:
      return w * sqrtT_;
    case ChannelKind::NonzeroMean:
      return spec_.G0 + w;
    case ChannelKind::FullyCorrelated:
      return sqrtR_ * w * sqrtT_;
  }
  throw ContractError("ChannelSampler: unknown variant");
}

ComplexMatrix sampleChannel(const ChannelSpec& spec, std::uint64_t seed, std::uint64_t draw) {
  return ChannelSampler(spec).draw(seed, draw);
}

}  // namespace mimostat::channels
