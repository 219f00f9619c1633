#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace mimostat {

using Cplx = std::complex<double>;
using CplxL = std::complex<long double>;

/// Thrown when an input violates an interface contract.
struct ContractError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Thrown when an otherwise valid computation fails to converge or overflows.
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline double logFactorial(int n) {
  if (n < 0) throw ContractError("logFactorial: negative argument");
  return std::lgamma(static_cast<double>(n) + 1.0);
}

inline double factorial(int n) { return std::exp(logFactorial(n)); }

/// log of the superfactorial prod_{j=1}^{p-1} j!  (empty product for p <= 1).
inline long double logSuperfactorial(int p) {
  long double s = 0.0L;
  for (int j = 2; j <= p - 1; ++j) s += std::lgamma(static_cast<long double>(j) + 1.0L);
  return s;
}

/// A complex value carried as mantissa * exp(logAbs), so that products of
/// determinant prefactors spanning hundreds of orders of magnitude stay exact.
struct ScaledValue {
  CplxL mantissa{0.0L, 0.0L};
  long double logAbs{0.0L};

  static ScaledValue of(CplxL v) {
    ScaledValue s;
    s.mantissa = v;
    s.normalize();
    return s;
  }
  static ScaledValue one() { return of(CplxL(1.0L, 0.0L)); }

  void normalize() {
    long double a = std::abs(mantissa);
    if (a == 0.0L) {
      logAbs = 0.0L;
      return;
    }
    mantissa /= a;
    logAbs += std::log(a);
  }
  ScaledValue& operator*=(const ScaledValue& o) {
    mantissa *= o.mantissa;
    logAbs += o.logAbs;
    normalize();
    return *this;
  }
  ScaledValue& operator*=(CplxL v) { return (*this) *= of(v); }
  ScaledValue& divideBy(const ScaledValue& o) {
    if (std::abs(o.mantissa) == 0.0L) throw NumericError("ScaledValue: division by zero");
    mantissa /= o.mantissa;
    logAbs -= o.logAbs;
    normalize();
    return *this;
  }
  void scaleLog(long double dlog) { logAbs += dlog; }
  bool isZero() const { return std::abs(mantissa) == 0.0L; }

  Cplx value() const {
    if (isZero()) return {0.0, 0.0};
    CplxL v = mantissa * std::exp(logAbs);
    return {static_cast<double>(v.real()), static_cast<double>(v.imag())};
  }
  double realValue() const { return value().real(); }
};

// splitmix64: the standard 64-bit mixing step; used both to derive per-draw
// substreams and as the uniform generator inside them.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

/// Counter-derived random substream: stream(seed, i) is independent of how
/// draws are partitioned across workers.
class SubstreamRng {
 public:
  SubstreamRng(std::uint64_t seed, std::uint64_t counter) {
    std::uint64_t s = seed;
    std::uint64_t a = splitmix64(s);
    state_ = a ^ (counter * 0xD1342543DE82EF95ull + 0x9E3779B97F4A7C15ull);
    splitmix64(state_);
  }

  std::uint64_t nextU64() { return splitmix64(state_); }

  /// Uniform in [0,1).
  double uniform() { return static_cast<double>(nextU64() >> 11) * 0x1.0p-53; }

  /// Uniform in (0,1); zero draws are rejected.
  double uniformPositive() {
    double u;
    do {
      u = uniform();
    } while (u == 0.0);
    return u;
  }

  /// Standard complex Gaussian CN(0,1): E|w|^2 = 1, via Box-Muller.
  Cplx complexGaussian() {
    double u1 = uniformPositive();
    double u2 = uniform();
    double r = std::sqrt(-std::log(u1));
    return {r * std::cos(2.0 * M_PI * u2), r * std::sin(2.0 * M_PI * u2)};
  }

  /// Standard real Gaussian N(0,1).
  double gaussian() {
    double u1 = uniformPositive();
    double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }

 private:
  std::uint64_t state_;
};

/// Integer power by repeated multiplication (avoids complex pow branch cuts).
template <class T>
T ipow(T base, int e) {
  if (e < 0) return T(1) / ipow(base, -e);
  T r(1);
  while (e > 0) {
    if (e & 1) r *= base;
    base *= base;
    e >>= 1;
  }
  return r;
}

}  // namespace mimostat
