#include <doctest.h>

#include "mimostat/quadrature.hpp"
#include "mimostat/specfun.hpp"

using namespace mimostat;
using namespace mimostat::specfun;

namespace {

double quadOracle(const std::function<double(double)>& f, double a, double b) {
  quadrature::QuadratureSettings qs;
  qs.absTol = 1e-14;
  qs.relTol = 1e-13;
  auto r = quadrature::adaptiveGK(f, a, b, qs);
  REQUIRE(r.converged);
  return r.value;
}

}  // namespace

TEST_CASE("expIntegralEi against a quadrature oracle") {
  // Ei(-1) = -int_1^inf e^{-t}/t dt
  const double oracle = -quadOracle([](double t) { return std::exp(-t) / t; }, 1.0, 60.0);
  CHECK(expIntegralEi(-1.0) == doctest::Approx(oracle).epsilon(1e-12));

  CHECK(std::fabs(expIntegralEi(-10.0)) < std::exp(-10.0) / 10.0 * (1.0 + 1e-9));
  CHECK(expIntegralEi(-10.0) < 0.0);

  CHECK(std::fabs(detail::eiSeries(-6.0) - detail::eiContinuedFraction(-6.0)) <=
        1e-12 * std::fabs(detail::eiSeries(-6.0)));

  CHECK_THROWS_AS(expIntegralEi(0.5), ContractError);
  CHECK_THROWS_AS(expIntegralEi(0.0), ContractError);
}

TEST_CASE("besselI0: series, asymptotic branch, scaled form") {
  CHECK(besselI0(0.0) == doctest::Approx(1.0));

  // 40-term series oracle at x=2
  long double sum = 1.0L, term = 1.0L;
  for (int k = 1; k <= 40; ++k) {
    term *= (2.0L * 2.0L / 4.0L) / (static_cast<long double>(k) * k);
    sum += term;
  }
  CHECK(std::fabs(besselI0(2.0) - (double)sum) <= 1e-13 * (double)sum);

  const double a = detail::besselI0Series(15.0);
  const double b = detail::besselI0AsymptoticScaled(15.0) * std::exp(15.0);
  CHECK(std::fabs(a - b) <= 1e-11 * a);

  CHECK(besselI0Scaled(50.0) == doctest::Approx(besselI0(50.0) * std::exp(-50.0)).epsilon(1e-12));
}

TEST_CASE("besselOrderMixedPartial: values and derivative structure") {
  CHECK(besselOrderMixedPartial(0, 0, 0, CplxL(0.7L, 0.0L), CplxL(1.3L, 0.0L)).real() ==
        doctest::Approx(besselI0(2.0 * std::sqrt(0.7 * 1.3))).epsilon(1e-13));
  // h_1(g, l) = sqrt(l/g) I_1(2 sqrt(g l)); series oracle
  long double g = 0.8L, l = 1.9L, i1 = 0.0L, term = std::sqrt(g * l);
  for (int k = 0; k < 60; ++k) {
    i1 += term;
    term *= g * l / ((k + 1.0L) * (k + 2.0L));
  }
  CHECK(besselOrderMixedPartial(1, 0, 0, CplxL(g, 0.0L), CplxL(l, 0.0L)).real() ==
        doctest::Approx((double)(std::sqrt(l / g) * i1)).epsilon(1e-12));

  // mixed partial vs central finite difference in the first argument
  const double h = 1e-6;
  const double fd = (besselOrderMixedPartial(2, 0, 1, CplxL(0.8L + h, 0.0L), CplxL(1.9L, 0.0L)).real() -
                     besselOrderMixedPartial(2, 0, 1, CplxL(0.8L - h, 0.0L), CplxL(1.9L, 0.0L)).real()) /
                    (2.0L * h);
  CHECK(besselOrderMixedPartial(2, 1, 1, CplxL(0.8L, 0.0L), CplxL(1.9L, 0.0L)).real() ==
        doctest::Approx((double)fd).epsilon(1e-7));
}

TEST_CASE("upperIncompleteGamma: exact cases and quadrature oracle") {
  for (double x : {0.2, 1.0, 3.7}) CHECK(upperIncompleteGamma(1, x) == doctest::Approx(std::exp(-x)).epsilon(1e-14));
  CHECK(upperIncompleteGamma(3, 1e-12) == doctest::Approx(2.0).epsilon(1e-9));
  const double oracle = quadOracle([](double t) { return t * t * t * std::exp(-t); }, 2.5, 80.0);
  CHECK(std::fabs(upperIncompleteGamma(4, 2.5) - oracle) <= 1e-11 * oracle);
  CHECK_THROWS_AS(upperIncompleteGamma(0, 1.0), ContractError);
  CHECK_THROWS_AS(upperIncompleteGamma(2, -1.0), ContractError);
}

TEST_CASE("kernelF: trivial values, closed-form cross-check, domain") {
  for (double x : {0.3, 1.0, 5.0}) CHECK(kernelF(x, Cplx(0, 0), 1).real() == doctest::Approx(1.0).epsilon(1e-11));
  CHECK(kernelF(1.0, Cplx(0, 0), 3).real() == doctest::Approx(5.0).epsilon(1e-11));

  // complex z is a quadrature value; the gamma closed form checks integer z
  const Cplx q = kernelF(0.9, Cplx(1.0, 0.0), 2);
  const Cplx c = kernelFViaGamma(0.9, 1, 2);
  CHECK(std::abs(q - c) <= 1e-10 * std::abs(c));
  const Cplx zc = kernelF(0.9, Cplx(0.7, 1.3), 2);
  CHECK(std::isfinite(zc.real()));
  CHECK(std::isfinite(zc.imag()));

  CHECK_THROWS_AS(kernelF(-1.0, Cplx(0, 0), 2), ContractError);
  CHECK_THROWS_AS(kernelF(1.0, Cplx(-1.5, 0), 2), ContractError);
}

TEST_CASE("kernelF invariants: gamma identity, z-derivative, recurrence, tolerance") {
  for (int m = 1; m <= 6; ++m)
    for (double x : {0.1, 1.0, 10.0}) {
      const Cplx f = kernelF(x, Cplx(0, 0), m);
      const Cplx ref = kernelFViaGamma(x, 0, m);
      CHECK(std::abs(f - ref) <= 1e-10 * std::abs(ref));
    }

  // dF/dz at z=0 by central difference
  for (int m : {1, 2, 4}) {
    const double x = 1.3;
    const double h = 1e-5;
    const double fd = (kernelF(x, Cplx(h, 0), m).real() - kernelF(x, Cplx(-h, 0), m).real()) / (2 * h);
    CHECK(std::fabs(kernelFdz(x, m) - fd) <= 1e-7 * std::fabs(fd));
  }

  // integration by parts: F(x,z,M) = x^{M-1} + (z+M-1) F(x,z,M-1)
  const double z = 0.3, x = 0.8;
  for (int m = 2; m <= 5; ++m) {
    const double lhs = kernelF(x, Cplx(z, 0), m).real();
    const double rhs = std::pow(x, m - 1) + (z + m - 1) * kernelF(x, Cplx(z, 0), m - 1).real();
    CHECK(std::fabs(lhs - rhs) <= 1e-9 * std::fabs(lhs));
  }

  // tolerance-monotone: tighter settings move the value less than the coarse tolerance
  quadrature::QuadratureSettings coarse;
  coarse.absTol = 1e-8;
  coarse.relTol = 1e-6;
  quadrature::QuadratureSettings tight;
  tight.absTol = 1e-14;
  tight.relTol = 1e-12;
  const Cplx vc = kernelF(1.1, Cplx(0.5, 0.5), 3, coarse);
  const Cplx vt = kernelF(1.1, Cplx(0.5, 0.5), 3, tight);
  CHECK(std::abs(vc - vt) <= 1e-6 * std::abs(vt));
}

TEST_CASE("kernelFdz: oracle values, decay, dual-route consistency") {
  const double oracle = quadOracle([](double lam) { return std::exp(-lam) * std::log1p(lam); }, 0.0, 60.0);
  CHECK(kernelFdz(1.0, 1) == doctest::Approx(oracle).epsilon(1e-10));
  CHECK(oracle == doctest::Approx(0.596347362323194).epsilon(1e-9));

  CHECK(kernelFdz(10.0, 1) < kernelFdz(1.0, 1));
  CHECK(kernelFdz(100.0, 1) < kernelFdz(10.0, 1));
  CHECK(kernelFdz(100.0, 1) > 0.0);

  for (int m : {1, 2, 3, 5})
    CHECK(std::fabs(kernelFdz(2.0, m) - kernelFdzViaEi(2.0, m)) <= 1e-9 * kernelFdz(2.0, m));
}

TEST_CASE("tricomiPsi: reductions and stability") {
  for (int a : {1, 2, 3})
    for (double x : {0.4, 1.0, 2.5})
      CHECK(tricomiPsi(a, Cplx(a + 1, 0), x).real() == doctest::Approx(std::pow(x, -a)).epsilon(1e-10));

  for (double x : {0.5, 1.0, 3.0}) {
    const double ref = -std::exp(x) * expIntegralEi(-x);  // e^x E_1(x)
    CHECK(tricomiPsi(1, Cplx(1, 0), x).real() == doctest::Approx(ref).epsilon(1e-10));
  }

  quadrature::QuadratureSettings tight;
  tight.absTol = 5e-13;
  tight.relTol = 5e-11;
  const Cplx v1 = tricomiPsi(2, Cplx(1.5, 0.5), 1.0);
  const Cplx v2 = tricomiPsi(2, Cplx(1.5, 0.5), 1.0, tight);
  CHECK(std::abs(v1 - v2) < 1e-9);
}

TEST_CASE("psi ln-derivative: quadrature route equals the Ei recurrence") {
  for (int a : {1, 2, 3, 4})
    for (double x : {0.5, 1.0, 2.0}) {
      const double q = psiLnIntegral(a, x);
      const double e = psiLnViaEi(a, x);
      CHECK(std::fabs(q - e) <= 1e-9 * std::fabs(q));
    }
}

TEST_CASE("tricomiPsiDeriv matches finite differences") {
  const double h = 1e-5;
  const Cplx b(2.5, 0.7);
  const Cplx fd = (tricomiPsi(2, b, 1.3 + h) - tricomiPsi(2, b, 1.3 - h)) / (2.0 * h);
  CHECK(std::abs(tricomiPsiDeriv(1, 2, b, 1.3) - fd) <= 1e-7 * std::abs(fd));
}
