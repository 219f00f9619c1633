#include "mimostat/specfun.hpp"

#include <cmath>
#include <vector>

namespace mimostat::specfun {

namespace {

constexpr long double kEulerGamma = 0.577215664901532860606512090082402431L;

double binom(int n, int k) {
  return std::exp(logFactorial(n) - logFactorial(k) - logFactorial(n - k));
}

// falling factorial n (n-1) ... (n-k+1)
double fallingFactorial(int n, int k) {
  double r = 1.0;
  for (int j = 0; j < k; ++j) r *= static_cast<double>(n - j);
  return r;
}

// J_m(x, w) = int_0^inf lam^m e^{-x lam} (1+lam)^w dlam
Cplx weightedTailIntegral(int m, double x, Cplx w, const QuadratureSettings& qs, bool lnWeight) {
  auto f = [&](double lam) -> Cplx {
    Cplx v = std::exp(-x * lam + w * std::log1p(lam));
    if (m > 0) v *= ipow(Cplx(lam), m);
    if (lnWeight) v *= std::log1p(lam);
    return v;
  };
  auto res = quadrature::integrateExpDecay(f, x, w.real() + m + (lnWeight ? 1.0 : 0.0), qs);
  if (!res.converged) throw NumericError("specfun: tail integral did not converge");
  return res.value;
}

// Laurent polynomial in 1/x: coeff[k] multiplies x^{-1-k}.
using Laurent = std::vector<long double>;

Laurent derivative(const Laurent& a) {
  Laurent d(a.size() + 1, 0.0L);
  for (std::size_t k = 0; k < a.size(); ++k) d[k + 1] = -static_cast<long double>(k + 1) * a[k];
  return d;
}

Laurent shiftDown(const Laurent& a) {  // multiply by 1/x
  Laurent s(a.size() + 1, 0.0L);
  for (std::size_t k = 0; k < a.size(); ++k) s[k + 1] = a[k];
  return s;
}

Laurent add(const Laurent& a, const Laurent& b, long double bScale = 1.0L) {
  Laurent r(std::max(a.size(), b.size()), 0.0L);
  for (std::size_t k = 0; k < a.size(); ++k) r[k] += a[k];
  for (std::size_t k = 0; k < b.size(); ++k) r[k] += bScale * b[k];
  return r;
}

long double evalLaurent(const Laurent& a, long double x) {
  long double inv = 1.0L / x;
  long double p = inv;
  long double s = 0.0L;
  for (long double c : a) {
    s += c * p;
    p *= inv;
  }
  return s;
}

}  // namespace

namespace detail {

double eiSeries(double x) {
  // Ei(x) = gamma + ln|x| + sum_k x^k / (k k!), alternating for x < 0;
  // long double absorbs the cancellation up to |x| = 6.
  long double xl = x;
  long double term = 1.0L;
  long double sum = 0.0L;
  for (int k = 1; k <= 200; ++k) {
    term *= xl / k;
    long double contrib = term / k;
    sum += contrib;
    if (std::fabs((double)contrib) < 1e-22 * (1.0 + std::fabs((double)sum))) break;
  }
  return static_cast<double>(kEulerGamma + std::log(std::fabs(xl)) + sum);
}

double eiContinuedFraction(double x) {
  // E_1(y) = e^{-y} / (y + 1 - 1^2/(y + 3 - 2^2/(y + 5 - ...))), Ei(-y) = -E_1(y)
  const long double y = -static_cast<long double>(x);
  const long double tiny = 1e-300L;
  long double b = y + 1.0L;
  long double c = 1.0L / tiny;
  long double d = 1.0L / b;
  long double h = d;
  for (int n = 1; n <= 300; ++n) {
    const long double a = -static_cast<long double>(n) * n;
    b += 2.0L;
    d = a * d + b;
    if (std::fabs((double)d) < (double)tiny) d = tiny;
    c = b + a / c;
    if (std::fabs((double)c) < (double)tiny) c = tiny;
    d = 1.0L / d;
    const long double delta = c * d;
    h *= delta;
    if (std::fabs((double)(delta - 1.0L)) < 1e-18) break;
  }
  return static_cast<double>(-std::exp(-y) * h);
}

double besselI0Series(double x) {
  const long double q = static_cast<long double>(x) * x / 4.0L;
  long double term = 1.0L;
  long double sum = 1.0L;
  for (int k = 1; k <= 300; ++k) {
    term *= q / (static_cast<long double>(k) * k);
    sum += term;
    if (term < 1e-20L * sum) break;
  }
  return static_cast<double>(sum);
}

double besselI0AsymptoticScaled(double x) {
  // e^{-x} I_0(x) ~ (2 pi x)^{-1/2} sum_k c_k / x^k, truncated at the smallest term
  const long double xl = x;
  long double term = 1.0L;
  long double sum = 1.0L;
  long double prev = 1e30L;
  for (int k = 1; k <= 40; ++k) {
    const long double num = (2.0L * k - 1.0L) * (2.0L * k - 1.0L);
    term *= num / (8.0L * k * xl);
    if (term > prev) break;
    sum += term;
    prev = term;
    if (term < 1e-19L * sum) break;
  }
  return static_cast<double>(sum / std::sqrt(2.0L * M_PIl * xl));
}

}  // namespace detail

double expIntegralEi(double x) {
  if (!(x < 0.0)) throw ContractError("expIntegralEi: only the x < 0 branch is supported");
  return (x >= -6.0) ? detail::eiSeries(x) : detail::eiContinuedFraction(x);
}

double besselI0(double x) {
  if (x < 0.0) throw ContractError("besselI0: negative argument");
  if (x <= 15.0) return detail::besselI0Series(x);
  return detail::besselI0AsymptoticScaled(x) * std::exp(x);
}

double besselI0Scaled(double x) {
  if (x < 0.0) throw ContractError("besselI0Scaled: negative argument");
  if (x <= 15.0) return detail::besselI0Series(x) * std::exp(-x);
  return detail::besselI0AsymptoticScaled(x);
}

CplxL besselI0MixedPartial(int a, int b, CplxL t, CplxL x) {
  return besselOrderMixedPartial(0, a, b, t, x);
}

CplxL besselOrderMixedPartial(int nu, int a, int b, CplxL t, CplxL x) {
  if (a < 0 || b < 0 || nu < 0) throw ContractError("besselOrderMixedPartial: negative order");
  // series term at k: t^{k-a} x^{k+nu-b} / ((k-a)! (k+nu-b)!)
  const int k0 = std::max({a, b - nu, 0});
  CplxL term = ipow(t, k0 - a) * ipow(x, k0 + nu - b) /
               (std::exp(std::lgamma(static_cast<long double>(k0 - a) + 1.0L)) *
                std::exp(std::lgamma(static_cast<long double>(k0 + nu - b) + 1.0L)));
  CplxL sum = term;
  for (int k = k0 + 1; k <= k0 + 600; ++k) {
    term *= t * x / (static_cast<long double>(k - a) * static_cast<long double>(k + nu - b));
    sum += term;
    if (std::abs(term) < 1e-22L * (1.0L + std::abs(sum))) break;
  }
  return sum;
}

double upperIncompleteGamma(int a, double x) {
  if (a < 1) throw ContractError("upperIncompleteGamma: a must be a positive integer");
  if (!(x > 0.0)) throw ContractError("upperIncompleteGamma: x must be positive");
  long double sum = 1.0L;
  long double term = 1.0L;
  for (int k = 1; k < a; ++k) {
    term *= static_cast<long double>(x) / k;
    sum += term;
  }
  return static_cast<double>(std::exp(std::lgamma((long double)a) - (long double)x) * sum);
}

Cplx kernelF(double x, Cplx z, int M, const QuadratureSettings& qs) {
  if (!(x > 0.0)) throw ContractError("kernelF: x must be positive");
  if (M < 1) throw ContractError("kernelF: M must be >= 1");
  if (z.real() <= -1.0) throw ContractError("kernelF: Re(z) must exceed -1");
  const Cplx w = z + Cplx(M - 1, 0.0);
  const Cplx j = weightedTailIntegral(0, x, w, qs, false);
  const double logxM = M * std::log(x);
  if (std::fabs(logxM) < 300.0) return std::pow(x, M) * j;
  return std::exp(Cplx(logxM, 0.0) + std::log(j));
}

Cplx kernelFViaGamma(double x, int zInt, int M) {
  const int a = zInt + M;
  if (a < 1) throw ContractError("kernelFViaGamma: z + M must be >= 1");
  return std::pow(x, -zInt) * std::exp(x) * upperIncompleteGamma(a, x);
}

Cplx kernelFDeriv(int n, double x, Cplx z, int M, const QuadratureSettings& qs) {
  if (n == 0) return kernelF(x, z, M, qs);
  const Cplx w = z + Cplx(M - 1, 0.0);
  Cplx sum = 0.0;
  for (int k = 0; k <= std::min(n, M); ++k) {
    const Cplx jm = weightedTailIntegral(n - k, x, w, qs, false);
    const double sign = ((n - k) % 2 == 0) ? 1.0 : -1.0;
    sum += binom(n, k) * fallingFactorial(M, k) * std::pow(x, M - k) * sign * jm;
  }
  return sum;
}

double kernelFdz(double x, int M, const QuadratureSettings& qs) {
  const Cplx w(M - 1, 0.0);
  const Cplx j = weightedTailIntegral(0, x, w, qs, true);
  return std::pow(x, M) * j.real();
}

double kernelFdzDeriv(int n, double x, int M, const QuadratureSettings& qs) {
  const Cplx w(M - 1, 0.0);
  double sum = 0.0;
  for (int k = 0; k <= std::min(n, M); ++k) {
    const Cplx jm = weightedTailIntegral(n - k, x, w, qs, true);
    const double sign = ((n - k) % 2 == 0) ? 1.0 : -1.0;
    sum += binom(n, k) * fallingFactorial(M, k) * std::pow(x, M - k) * sign * jm.real();
  }
  return sum;
}

double kernelFdzViaEi(double x, int M) {
  const double signM = (M % 2 == 0) ? 1.0 : -1.0;
  return std::exp(x) * std::pow(x, M) * signM * eiRatioDeriv(M - 1, x);
}

Cplx tricomiPsi(int a, Cplx b, double x, const QuadratureSettings& qs) {
  if (a < 1) throw ContractError("tricomiPsi: a must be a positive integer");
  if (!(x > 0.0)) throw ContractError("tricomiPsi: x must be positive");
  const Cplx w = b - Cplx(a + 1, 0.0);
  return weightedTailIntegral(a - 1, x, w, qs, false) * std::exp(-logFactorial(a - 1));
}

Cplx tricomiPsiDeriv(int n, int a, Cplx b, double x, const QuadratureSettings& qs) {
  double rising = 1.0;
  for (int j = 0; j < n; ++j) rising *= static_cast<double>(a + j);
  const double sign = (n % 2 == 0) ? 1.0 : -1.0;
  return sign * rising * tricomiPsi(a + n, b + Cplx(n, 0.0), x, qs);
}

double psiLnIntegral(int a, double x, const QuadratureSettings& qs) {
  if (a < 1) throw ContractError("psiLnIntegral: a must be a positive integer");
  const Cplx w(0.0, 0.0);
  const Cplx j = weightedTailIntegral(a - 1, x, w, qs, true);
  return j.real() * std::exp(-logFactorial(a - 1));
}

double psiLnIntegralDeriv(int n, int a, double x, const QuadratureSettings& qs) {
  const Cplx w(0.0, 0.0);
  const Cplx j = weightedTailIntegral(a - 1 + n, x, w, qs, true);
  const double sign = (n % 2 == 0) ? 1.0 : -1.0;
  return sign * j.real() * std::exp(-logFactorial(a - 1));
}

double psiLnViaEi(int a, double x) {
  const double sign = (a % 2 == 0) ? 1.0 : -1.0;
  return sign * std::exp(-logFactorial(a - 1)) * expEiRatioDeriv(a - 1, x);
}

double eiRatioDeriv(int n, double x) {
  if (!(x > 0.0)) throw ContractError("eiRatioDeriv: x must be positive");
  // f = A(x) Ei(-x) + B(x) e^{-x}; step (A,B) -> (A', A/x + B' - B)
  Laurent A{1.0L};  // 1/x
  Laurent B{};
  for (int k = 0; k < n; ++k) {
    Laurent An = derivative(A);
    Laurent Bn = add(derivative(B), shiftDown(A));
    Bn = add(Bn, B, -1.0L);
    A = std::move(An);
    B = std::move(Bn);
  }
  const long double xl = x;
  const long double ei = expIntegralEi(-x);
  return static_cast<double>(evalLaurent(A, xl) * ei + evalLaurent(B, xl) * std::exp(-xl));
}

double expEiRatioDeriv(int n, double x) {
  if (!(x > 0.0)) throw ContractError("expEiRatioDeriv: x must be positive");
  // f = e^x A(x) Ei(-x) + B(x); step (A,B) -> (A + A', A/x + B')
  Laurent A{1.0L};  // 1/x
  Laurent B{};
  for (int k = 0; k < n; ++k) {
    Laurent An = add(A, derivative(A));
    Laurent Bn = add(derivative(B), shiftDown(A));
    A = std::move(An);
    B = std::move(Bn);
  }
  const long double xl = x;
  const long double ei = expIntegralEi(-x);
  return static_cast<double>(std::exp(xl) * evalLaurent(A, xl) * ei + evalLaurent(B, xl));
}

}  // namespace mimostat::specfun
