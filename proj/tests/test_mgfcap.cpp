#include <doctest.h>

#include "mimostat/eigdens.hpp"
#include "mimostat/mcsim.hpp"
#include "mimostat/mgfcap.hpp"
#include "mimostat/specfun.hpp"

using namespace mimostat;
using namespace mimostat::mgfcap;
using channels::ChannelSpec;
using numkit::ComplexMatrix;

namespace {

ComplexMatrix diag2(double a, double b) {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 0) = a;
  m(1, 1) = b;
  return m;
}

ComplexMatrix diag3(double a, double b, double c) {
  ComplexMatrix m = ComplexMatrix::Zero(3, 3);
  m(0, 0) = a;
  m(1, 1) = b;
  m(2, 2) = c;
  return m;
}

double relDiffC(Cplx a, Cplx b) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300}); }

}  // namespace

TEST_CASE("mgf normalization at z = 0, all variants") {
  ComplexMatrix g0(2, 3);
  g0 << Cplx(0.7, 0.2), Cplx(-0.3, 0.4), Cplx(0.1, -0.6), Cplx(0.5, 0.0), Cplx(-0.2, 0.3), Cplx(0.8, -0.1);
  const std::vector<ChannelSpec> specs = {
      ChannelSpec::makeIid(3, 2),
      ChannelSpec::makeSemiCorrelated(diag3(1.1, 0.6, 0.35), 2),
      ChannelSpec::makeNonzeroMean(g0),
      ChannelSpec::makeFullyCorrelated(diag3(1.1, 0.6, 0.35), diag2(0.9, 1.4)),
  };
  for (const auto& s : specs) {
    const auto g = mgf(s, Cplx(0.0, 0.0));
    CHECK(std::abs(g.value - Cplx(1.0, 0.0)) < 1e-10);
  }
}

TEST_CASE("fully correlated 1x1: closed form and first moment") {
  // g(z) = e * Gamma(z+1, 1); elementary at integer z, and g(1) = 1 + E[lambda] = 2
  const auto s = ChannelSpec::makeFullyCorrelated(ComplexMatrix::Identity(1, 1), ComplexMatrix::Identity(1, 1));
  CHECK(mgf(s, Cplx(1.0, 0.0)).value.real() == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(mgf(s, Cplx(2.0, 0.0)).value.real() ==
        doctest::Approx(std::exp(1.0) * specfun::upperIncompleteGamma(3, 1.0)).epsilon(1e-10));
  CHECK(mgf(s, Cplx(0.5, 0.0)).value.real() > 1.0);
}

TEST_CASE("the general fully correlated assembly reproduces the square closed form") {
  // hand-built det F(t_i r_j; z) / (prod (z+i-1)^{i-1} Delta(t) Delta(r))
  const std::vector<double> t{1.7, 0.6};
  const std::vector<double> r{1.2, 0.8};
  const Cplx z(0.45, 0.3);
  ComplexMatrix f(2, 2);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) f(i, j) = specfun::kernelF(t[i] * r[j], z, 2);
  const Cplx byHand = numkit::det(f) / ((z + 1.0) * Cplx((t[1] - t[0]) * (r[1] - r[0]), 0.0));

  const auto s = ChannelSpec::makeFullyCorrelated(diag2(1.0 / t[0], 1.0 / t[1]), diag2(1.0 / r[0], 1.0 / r[1]));
  CHECK(relDiffC(mgf(s, z).value, byHand) < 1e-10);
}

TEST_CASE("semicorrelated mgf against the Monte Carlo oracle") {
  const auto s = ChannelSpec::makeSemiCorrelated(diag2(1.0, 2.0), 3);
  const Cplx z(0.5, 0.0);
  const Cplx analytic = mgf(s, z).value;
  const auto mc = mcsim::estimate(s, mcsim::MgfAt{z}, 1000000, 97);
  CHECK(std::abs(analytic - mc.mean) < 4.0 * mc.stderrOfMean);
}

TEST_CASE("ergodic capacity: quadrature value, confluence, and orderings") {
  CHECK(ergodicCapacity(ChannelSpec::makeIid(1, 1)) == doctest::Approx(0.596347362323194).epsilon(1e-9));

  // fully correlated with R -> I (near-degenerate) approaches the semicorrelated value
  const auto t4 = channels::correlationMatrix({4, 0.5, 10.0});
  ComplexMatrix rNear = ComplexMatrix::Identity(4, 4);
  for (int i = 0; i < 4; ++i) rNear(i, i) = 1.0 + 0.01 * (i - 1.5);
  EvalOptions tight;
  tight.quad.absTol = 1e-13;
  tight.quad.relTol = 1e-12;
  const double eiNear = ergodicCapacity(ChannelSpec::makeFullyCorrelated(t4, rNear), tight);
  const double eiSemi = ergodicCapacity(ChannelSpec::makeSemiCorrelated(t4, 4));
  CHECK(std::fabs(eiNear - eiSemi) < 2e-2);  // R is near I, not I
  const double eiExact = ergodicCapacity(ChannelSpec::makeFullyCorrelated(t4, ComplexMatrix::Identity(4, 4)));
  CHECK(std::fabs(eiExact - eiSemi) <= 1e-6 * eiSemi);

  // both antenna orderings agree with the transposed problem
  const auto a = ergodicCapacity(ChannelSpec::makeFullyCorrelated(diag3(1.3, 0.8, 0.5), diag2(1.1, 0.7)));
  const auto b = ergodicCapacity(ChannelSpec::makeFullyCorrelated(diag2(1.1, 0.7), diag3(1.3, 0.8, 0.5)));
  CHECK(a == doctest::Approx(b).epsilon(1e-9));
}

TEST_CASE("mgf is symmetric in the two spectra for M = N") {
  const auto t = diag3(1.4, 0.9, 0.55);
  const auto r = diag3(1.15, 0.75, 0.5);
  for (Cplx z : {Cplx(0.4, 0.0), Cplx(0.2, 0.9)}) {
    const Cplx g1 = mgf(ChannelSpec::makeFullyCorrelated(t, r), z).value;
    const Cplx g2 = mgf(ChannelSpec::makeFullyCorrelated(r, t), z).value;
    CHECK(relDiffC(g1, g2) < 1e-9);
  }
}

TEST_CASE("confluence chain: fullcorr(T, R=I) == semicorr(T) == iid at T=I") {
  const auto t = diag3(1.2, 0.85, 0.6);
  const auto full = ChannelSpec::makeFullyCorrelated(t, ComplexMatrix::Identity(3, 3));
  const auto semi = ChannelSpec::makeSemiCorrelated(t, 3);
  const auto semiI = ChannelSpec::makeSemiCorrelated(ComplexMatrix::Identity(3, 3), 3);
  const auto iid = ChannelSpec::makeIid(3, 3);
  for (Cplx z : {Cplx(0.3, 0.0), Cplx(1.1, 0.0), Cplx(0.0, 1.3), Cplx(0.4, -0.8)}) {
    CHECK(relDiffC(mgf(full, z).value, mgf(semi, z).value) < 1e-6);
    CHECK(relDiffC(mgf(semiI, z).value, mgf(iid, z).value) < 1e-6);
  }
}

TEST_CASE("characteristic function bound |g(iu)| <= 1") {
  const auto s = ChannelSpec::makeSemiCorrelated(diag2(1.0, 0.5), 2);
  for (double u = 0.5; u <= 12.0; u += 0.5) CHECK(std::abs(mgf(s, Cplx(0.0, u)).value) <= 1.0 + 1e-9);
}

TEST_CASE("derivatives at zero: analytic vs finite differences, second moment, variance") {
  const auto s = ChannelSpec::makeSemiCorrelated(diag2(1.3, 0.7), 2);
  const double analytic = ergodicCapacity(s);
  auto g = [&](double z) { return mgf(s, Cplx(z, 0.0)).value.real(); };
  const double h = 1e-3;
  const double d1 = (g(h) - g(-h)) / (2 * h);
  const double d2 = (g(h / 2) - g(-h / 2)) / h;
  const double fd = (4 * d2 - d1) / 3;
  CHECK(std::fabs(analytic - fd) <= 1e-5 * std::fabs(analytic));
  CHECK(mgfDerivativeAtZero(s, 1) == doctest::Approx(analytic));

  // E[I^2] for the 1x1 iid channel versus a quadrature oracle
  quadrature::QuadratureSettings qs;
  qs.absTol = 1e-13;
  qs.relTol = 1e-12;
  auto oracle = quadrature::integrateExpDecay(
      [](double lam) { return std::exp(-lam) * std::log1p(lam) * std::log1p(lam); }, 1.0, 3.0, qs);
  CHECK(std::fabs(mgfDerivativeAtZero(ChannelSpec::makeIid(1, 1), 2) - oracle.value) < 1e-5);

  // variance is nonnegative across a spread of specs
  ComplexMatrix g0(2, 2);
  g0 << Cplx(0.7, 0.2), Cplx(-0.3, 0.4), Cplx(0.1, -0.6), Cplx(0.5, 0.0);
  std::vector<ChannelSpec> sweep;
  for (int nt = 1; nt <= 3; ++nt)
    for (int nr = 1; nr <= 3; ++nr) sweep.push_back(ChannelSpec::makeIid(nt, nr));
  sweep.push_back(ChannelSpec::makeSemiCorrelated(diag2(1.0, 0.4), 3));
  sweep.push_back(ChannelSpec::makeNonzeroMean(g0));
  for (const auto& spec : sweep) CHECK(mutualInformationVariance(spec) >= -1e-6);
}

TEST_CASE("moments from the mgf agree with density quadrature for N <= 2") {
  quadrature::QuadratureSettings qs;
  qs.absTol = 1e-11;
  qs.relTol = 1e-10;
  auto meanFromDensity = [&](const eigdens::JointDensity& d, double decay) {
    if (d.N == 1) {
      auto r = quadrature::integrateExpDecay(
          [&](double l) { return std::log1p(l) * d(std::vector<double>{l}); }, decay, 8.0, qs);
      return r.value;
    }
    auto outer = quadrature::integrateExpDecay(
        [&](double l1) {
          auto inner = quadrature::integrateExpDecay(
              [&](double l2) {
                return (std::log1p(l1) + std::log1p(l2)) * d(std::vector<double>{l1, l2});
              },
              decay, 8.0, qs);
          return inner.value;
        },
        decay, 8.0, qs);
    return outer.value;
  };

  CHECK(std::fabs(meanFromDensity(eigdens::densityIid(2, 2), 0.6) - ergodicCapacity(ChannelSpec::makeIid(2, 2))) <
        1e-6);
  const auto t = diag2(1.0, 2.0);
  CHECK(std::fabs(meanFromDensity(eigdens::densitySemiCorr(t, 2, 2), 0.4) -
                  ergodicCapacity(ChannelSpec::makeSemiCorrelated(t, 2))) < 1e-6);
}

TEST_CASE("outage: limits, conventions, inversion against empirical survival") {
  const auto s = ChannelSpec::makeIid(2, 2);
  OutageQuery q;
  q.iOut = 0.0;
  const auto at0 = outage(s, q);
  CHECK(std::fabs(at0.exceedance - 1.0) < 1e-4);
  CHECK(at0.cdf == doctest::Approx(1.0 - at0.exceedance));

  q.iOut = 50.0;
  CHECK(outage(ChannelSpec::makeIid(1, 1), q).exceedance < 1e-4);

  q.iOut = 1.0;
  const auto r = outage(s, q);
  CHECK(r.value(OutageQuery::Convention::Exceedance) == doctest::Approx(r.exceedance));
  CHECK(r.value(OutageQuery::Convention::Cdf) == doctest::Approx(r.cdf));
  CHECK(r.exceedance + r.cdf == doctest::Approx(1.0).epsilon(1e-12));

  std::vector<double> grid;
  for (int i = 1; i <= 20; ++i) grid.push_back(0.2 * i);
  const auto curve = outageCurve(s, grid);
  const auto surv = mcsim::empiricalSurvival(s, grid, 100000, 1234);
  double sup = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i)
    sup = std::max(sup, std::fabs(curve[i].exceedance - surv[i].mean.real()));
  CHECK(sup < 0.015);

  CHECK_THROWS_AS(outage(s, OutageQuery{-1.0}), ContractError);
}

TEST_CASE("mgf rejects the divergent domain") {
  CHECK_THROWS_AS(mgf(ChannelSpec::makeIid(1, 1), Cplx(-1.5, 0.0)), ContractError);
}

TEST_CASE("nonzero-mean mgf collapses to iid as the mean vanishes") {
  for (auto [nt, nr] : {std::pair{2, 2}, std::pair{3, 2}}) {
    const auto nz = ChannelSpec::makeNonzeroMean(ComplexMatrix::Zero(nr, nt));
    const auto ii = ChannelSpec::makeIid(nt, nr);
    for (Cplx z : {Cplx(0.6, 0.0), Cplx(0.0, 0.8)})
      CHECK(relDiffC(mgf(nz, z).value, mgf(ii, z).value) < 1e-9);
  }
}
