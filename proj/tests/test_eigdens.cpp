#include <doctest.h>

#include <algorithm>

#include "mimostat/eigdens.hpp"
#include "mimostat/mcsim.hpp"
#include "mimostat/specfun.hpp"

using namespace mimostat;
using namespace mimostat::eigdens;
using channels::ChannelSpec;
using numkit::ComplexMatrix;

namespace {

quadrature::QuadratureSettings normSettings() {
  quadrature::QuadratureSettings qs;
  qs.absTol = 1e-10;
  qs.relTol = 1e-9;
  return qs;
}

double integrate1d(const JointDensity& d, double decay) {
  auto r = quadrature::integrateExpDecay([&](double l) { return d(std::vector<double>{l}); }, decay, 8.0,
                                         normSettings());
  REQUIRE(r.converged);
  return r.value;
}

double integrate2d(const JointDensity& d, double decay) {
  auto outer = quadrature::integrateExpDecay(
      [&](double l1) {
        auto inner = quadrature::integrateExpDecay([&](double l2) { return d(std::vector<double>{l1, l2}); }, decay,
                                                   8.0, normSettings());
        return inner.value;
      },
      decay, 8.0, normSettings());
  REQUIRE(outer.converged);
  return outer.value;
}

// Kolmogorov-Smirnov distance between the analytic largest-eigenvalue
// marginal CDF and the empirical one from sampled channels.
double ksLargestEigenvalue(const JointDensity& d, long long n, std::uint64_t seed, double decay) {
  channels::ChannelSampler sampler(d.spec);
  std::vector<double> maxEig(n);
  for (long long i = 0; i < n; ++i) {
    const ComplexMatrix g = sampler.draw(seed, i);
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(g.adjoint() * g, Eigen::EigenvaluesOnly);
    maxEig[i] = es.eigenvalues().maxCoeff();
  }
  std::sort(maxEig.begin(), maxEig.end());

  auto analyticCdf = [&](double x) {
    if (d.N == 1) {
      auto r = quadrature::adaptiveGK([&](double l) { return d(std::vector<double>{l}); }, 1e-12, x, normSettings());
      return r.value;
    }
    auto outer = quadrature::adaptiveGK(
        [&](double l1) {
          auto inner = quadrature::adaptiveGK([&](double l2) { return d(std::vector<double>{l1, l2}); }, 1e-12, x,
                                              normSettings());
          return inner.value;
        },
        1e-12, x, normSettings());
    return outer.value;
  };

  double ks = 0.0;
  const int grid = 20;
  for (int k = 1; k <= grid; ++k) {
    const std::size_t idx = std::min<std::size_t>(n - 1, (n * k) / (grid + 1));
    const double x = maxEig[idx];
    const double emp = static_cast<double>(idx + 1) / static_cast<double>(n);
    ks = std::max(ks, std::fabs(analyticCdf(x) - emp));
  }
  (void)decay;
  return ks;
}

}  // namespace

TEST_CASE("densityIid: closed small cases and normalization") {
  const auto d11 = densityIid(1, 1);
  CHECK(d11(std::vector<double>{0.7}) == doctest::Approx(std::exp(-0.7)).epsilon(1e-12));

  const auto d13 = densityIid(1, 3);
  const double l = 1.9;
  CHECK(d13(std::vector<double>{l}) == doctest::Approx(l * l * std::exp(-l) / 2.0).epsilon(1e-12));

  CHECK(integrate2d(densityIid(2, 2), 0.6) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("densitySemiCorr: identity correlation reduces to iid pointwise") {
  SubstreamRng rng(41, 0);
  for (auto [nt, nr] : {std::pair{2, 2}, std::pair{3, 2}, std::pair{2, 3}}) {
    const auto ds = densitySemiCorr(ComplexMatrix::Identity(nt, nt), nt, nr);
    const auto di = densityIid(nt, nr);
    const int n = std::min(nt, nr);
    for (int k = 0; k < 20; ++k) {
      std::vector<double> lam;
      for (int i = 0; i < n; ++i) lam.push_back(0.05 + 6.0 * rng.uniform());
      const double a = ds(lam), b = di(lam);
      CHECK(std::fabs(a - b) <= 1e-8 * std::max(1.0, std::fabs(b)));
    }
  }
}

TEST_CASE("densitySemiCorr: single-antenna reductions") {
  // nt = 1: Gamma density t^nr lam^{nr-1} e^{-t lam} / (nr-1)!
  ComplexMatrix t1(1, 1);
  t1(0, 0) = 0.5;  // t = 2
  const auto d = densitySemiCorr(t1, 1, 3);
  const double l = 1.3, t = 2.0;
  CHECK(d(std::vector<double>{l}) ==
        doctest::Approx(std::pow(t, 3) * l * l * std::exp(-t * l) / 2.0).epsilon(1e-10));

  // nt = 2 > nr = 1: hypoexponential mixture
  ComplexMatrix t2 = ComplexMatrix::Zero(2, 2);
  t2(0, 0) = 1.0;
  t2(1, 1) = 0.5;  // rates 1 and 2
  const auto dh = densitySemiCorr(t2, 2, 1);
  const double ref = 1.0 * 2.0 / (2.0 - 1.0) * (std::exp(-l) - std::exp(-2.0 * l));
  CHECK(dh(std::vector<double>{l}) == doctest::Approx(ref).epsilon(1e-10));
}

TEST_CASE("densitySemiCorr: normalization at nt=2, nr=2") {
  ComplexMatrix t = ComplexMatrix::Zero(2, 2);
  t(0, 0) = 1.0;
  t(1, 1) = 2.0;
  CHECK(integrate2d(densitySemiCorr(t, 2, 2), 0.4) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("densityNonzeroMean: zero-mean and Rice reductions") {
  const auto d0 = densityNonzeroMean(ComplexMatrix::Zero(1, 1), 1, 1);
  CHECK(d0(std::vector<double>{1.1}) == doctest::Approx(std::exp(-1.1)).epsilon(1e-10));

  ComplexMatrix g0(1, 1);
  g0(0, 0) = Cplx(1.1, -0.4);
  const double gamma = std::norm(g0(0, 0));
  const auto d = densityNonzeroMean(g0, 1, 1);
  const double l = 2.3;
  CHECK(d(std::vector<double>{l}) ==
        doctest::Approx(std::exp(-l - gamma) * specfun::besselI0(2.0 * std::sqrt(gamma * l))).epsilon(1e-10));
  CHECK(integrate1d(d, 0.4) == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("densityNonzeroMean: rectangular case matches the noncentral reference") {
  ComplexMatrix g0(2, 1);
  g0 << Cplx(0.9, 0.3), Cplx(-0.5, 0.7);
  const double gamma = std::norm(g0(0, 0)) + std::norm(g0(1, 0));
  const auto d = densityNonzeroMean(g0, 1, 2);
  for (double l : {0.4, 1.5, 3.8}) {
    const double ref = std::exp(-l - gamma) *
                       static_cast<double>(specfun::besselOrderMixedPartial(
                                               1, 0, 0, CplxL(gamma, 0.0L), CplxL(l, 0.0L))
                                               .real());
    CHECK(d(std::vector<double>{l}) == doctest::Approx(ref).epsilon(1e-12));
  }
  CHECK(integrate1d(d, 0.4) == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("densityNonzeroMean: rank-one 2x2 normalization") {
  ComplexMatrix g0 = ComplexMatrix::Zero(2, 2);
  g0(0, 0) = Cplx(1.0, 0.0);
  g0(1, 0) = Cplx(0.5, -0.5);
  CHECK(integrate2d(densityNonzeroMean(g0, 2, 2), 0.35) == doctest::Approx(1.0).epsilon(1e-5));
}

TEST_CASE("densities are nonnegative and exchange symmetric") {
  ComplexMatrix t(2, 2);
  t << Cplx(1.3, 0.0), Cplx(0.4, 0.2), Cplx(0.4, -0.2), Cplx(0.9, 0.0);
  ComplexMatrix g0(3, 2);
  g0 << Cplx(0.7, 0.2), Cplx(-0.3, 0.4), Cplx(0.1, -0.6), Cplx(0.5, 0.0), Cplx(-0.2, 0.3), Cplx(0.8, -0.1);
  const std::vector<JointDensity> ds = {densityIid(2, 3), densitySemiCorr(t, 2, 2),
                                        densitySemiCorr(t, 2, 4), densityNonzeroMean(g0, 2, 3)};
  SubstreamRng rng(53, 0);
  for (const auto& d : ds) {
    for (int k = 0; k < 1000; ++k) {
      std::vector<double> lam;
      for (int i = 0; i < d.N; ++i) lam.push_back(10.0 * rng.uniformPositive());
      const double v = d(lam);
      CHECK(v >= -1e-12);
      std::vector<double> perm(lam.rbegin(), lam.rend());
      const double w = d(perm);
      CHECK(std::fabs(v - w) <= 1e-10 * std::max(1.0, std::fabs(v)));
    }
  }
}

TEST_CASE("largest-eigenvalue marginal matches Monte Carlo (KS)") {
  const auto d = densityIid(2, 2);
  CHECK(ksLargestEigenvalue(d, 20000, 7, 0.5) < 0.03);
}

TEST_CASE("N=3 normalization by importance sampling from the zero-mean ensemble") {
  ComplexMatrix t(3, 3);
  t.setZero();
  t(0, 0) = 1.2;
  t(1, 1) = 0.9;
  t(2, 2) = 0.75;
  const auto dCorr = densitySemiCorr(t, 3, 3);
  const auto dIid = densityIid(3, 3);
  channels::ChannelSampler sampler(ChannelSpec::makeIid(3, 3));
  const long long n = 20000;
  double mean = 0.0, m2 = 0.0;
  for (long long i = 0; i < n; ++i) {
    const ComplexMatrix g = sampler.draw(61, i);
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(g.adjoint() * g, Eigen::EigenvaluesOnly);
    std::vector<double> lam(es.eigenvalues().data(), es.eigenvalues().data() + 3);
    const double w = dCorr(lam) / dIid(lam);
    const double delta = w - mean;
    mean += delta / static_cast<double>(i + 1);
    m2 += delta * (w - mean);
  }
  const double se = std::sqrt(m2 / static_cast<double>(n - 1) / static_cast<double>(n));
  CHECK(std::fabs(mean - 1.0) < 4.0 * se);
}

TEST_CASE("densityFor dispatch and contracts") {
  CHECK(densityFor(ChannelSpec::makeIid(2, 2)).N == 2);
  ComplexMatrix t = ComplexMatrix::Identity(2, 2);
  CHECK_THROWS_WITH_AS(densityFor(ChannelSpec::makeFullyCorrelated(t, t)), doctest::Contains("mgf"), ContractError);
  const auto d = densityIid(2, 2);
  CHECK_THROWS_AS(d(std::vector<double>{1.0}), ContractError);
  CHECK_THROWS_AS(d(std::vector<double>{1.0, -0.5}), ContractError);
}
