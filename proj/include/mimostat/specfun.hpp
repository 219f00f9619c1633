#pragma once

#include "mimostat/common.hpp"
#include "mimostat/quadrature.hpp"

namespace mimostat::specfun {

using quadrature::QuadratureSettings;

/// Ei(x) for x < 0: convergent series for |x| <= 6, continued fraction beyond.
double expIntegralEi(double x);

/// Modified Bessel function I_0(x), x >= 0: power series up to x = 15,
/// scaled asymptotic form beyond.
double besselI0(double x);

/// exp(-x) * I_0(x), safe for large arguments.
double besselI0Scaled(double x);

/// d^a/dt^a d^b/dx^b of I_0(2 sqrt(t x)); from the defining series this is
/// sum_{k >= max(a,b)} t^{k-a} x^{k-b} / ((k-a)! (k-b)!).
CplxL besselI0MixedPartial(int a, int b, CplxL t, CplxL x);

/// d^a/dt^a d^b/dx^b of (x/t)^{nu/2} I_nu(2 sqrt(t x)), an entire function of
/// both arguments: sum_k t^k x^{k+nu} / (k! (k+nu)!).
CplxL besselOrderMixedPartial(int nu, int a, int b, CplxL t, CplxL x);

/// Gamma(a, x) for integer a >= 1, x > 0: finite sum (a-1)! e^-x sum x^k/k!.
double upperIncompleteGamma(int a, double x);

/// F(x,z) = x^M int_0^inf e^{-x lam} (1+lam)^{z+M-1} dlam, complex z with
/// Re z > -1. The defining integral is always evaluated by quadrature; the
/// incomplete-gamma closed form is a cross-check path for real integer z.
Cplx kernelF(double x, Cplx z, int M, const QuadratureSettings& qs = {});

/// x^{-z} e^x Gamma(z+M, x) for integer z >= 1-M (cross-check only).
Cplx kernelFViaGamma(double x, int zInt, int M);

/// n-th derivative of F(x,z) with respect to x.
Cplx kernelFDeriv(int n, double x, Cplx z, int M, const QuadratureSettings& qs = {});

/// dF(x,z)/dz at z=0: x^M int e^{-x lam} (1+lam)^{M-1} ln(1+lam) dlam.
double kernelFdz(double x, int M, const QuadratureSettings& qs = {});

/// n-th x-derivative of kernelFdz.
double kernelFdzDeriv(int n, double x, int M, const QuadratureSettings& qs = {});

/// The same quantity through the exponential-integral derivative recurrence:
/// e^x x^M (-1)^M [Ei(-x)/x]^{(M-1)}.
double kernelFdzViaEi(double x, int M);

/// Tricomi Psi(a,b,x) = (1/Gamma(a)) int_0^inf e^{-xt} t^{a-1} (1+t)^{b-a-1} dt
/// for integer a >= 1, x > 0, complex b.
Cplx tricomiPsi(int a, Cplx b, double x, const QuadratureSettings& qs = {});

/// d^n/dx^n Psi(a,b,x) = (-1)^n (a)_n Psi(a+n, b+n, x).
Cplx tricomiPsiDeriv(int n, int a, Cplx b, double x, const QuadratureSettings& qs = {});

/// d/dz Psi(a, a+z+1, x) at z=0: (1/Gamma(a)) int e^{-xt} t^{a-1} ln(1+t) dt.
double psiLnIntegral(int a, double x, const QuadratureSettings& qs = {});

/// n-th x-derivative of psiLnIntegral.
double psiLnIntegralDeriv(int n, int a, double x, const QuadratureSettings& qs = {});

/// Same as psiLnIntegral through the Ei recurrence:
/// (-1)^a / Gamma(a) * [e^x Ei(-x)/x]^{(a-1)}.
double psiLnViaEi(int a, double x);

/// [Ei(-x)/x]^{(n)} via an exact integer-coefficient recurrence.
double eiRatioDeriv(int n, double x);

/// [e^x Ei(-x)/x]^{(n)} via an exact integer-coefficient recurrence.
double expEiRatioDeriv(int n, double x);

namespace detail {
double eiSeries(double x);
double eiContinuedFraction(double x);
double besselI0Series(double x);
double besselI0AsymptoticScaled(double x);
}  // namespace detail

}  // namespace mimostat::specfun
