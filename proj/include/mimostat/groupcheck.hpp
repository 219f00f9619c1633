#pragma once

#include <cstdint>
#include <vector>

#include "mimostat/numkit.hpp"

namespace mimostat::groupcheck {

using numkit::ComplexMatrix;

/// Irreducible representation label of U(M): nonincreasing nonnegative integers.
struct Representation {
  std::vector<int> m;

  explicit Representation(std::vector<int> parts);
  int M() const { return static_cast<int>(m.size()); }
  /// Shifted labels k_i = m_i - i + M (1-based i), strictly decreasing.
  std::vector<int> k() const;
  bool operator==(const Representation& o) const { return m == o.m; }
};

/// Exact dimension from the inverse-factorial determinant, evaluated as an
/// integer determinant (fraction-free elimination).
long long dimension(const Representation& rep);

/// Exact dimension from the shifted-label Vandermonde form.
long long dimensionVandermonde(const Representation& rep);

/// Weyl character at the given eigenvalues; coincident eigenvalues are routed
/// through the confluent ratio engine.
Cplx weylCharacter(const Representation& rep, const std::vector<Cplx>& eigs,
                   double mergeTol = numkit::kDefaultMergeTol);
Cplx weylCharacter(const Representation& rep, const numkit::Spectrum& eigs);

/// Expansion coefficient of exp(x tr A) on the character basis.
Cplx characterCoefficient(const Representation& rep, Cplx x);

/// |exp(x tr A) - sum over representations with m_1 <= cutoff| for M <= 3.
double expansionResidual(const ComplexMatrix& a, Cplx x, int cutoff);

enum class CauchyBinetWeight {
  InvFactorial,     // w(k) = 1/k!,        W(x) = e^x
  AltInvFactorial,  // w(k) = (-1)^k/k!,   W(x) = e^{-x}
  InvFactorialSq,   // w(k) = 1/(k!)^2,    W(x) = I_0(2 sqrt(x))
};

/// Truncation residual of the minor-sum identity
/// sum_{k_1>...>k_M>=0} det(a_i^{k_j}) det(b_i^{k_j}) prod w(k_i) = det[W(a_i b_j)].
double cauchyBinetResidual(const std::vector<double>& a, const std::vector<double>& b, CauchyBinetWeight w,
                           int cutoff);

struct HaarResidual {
  double maxResidual = 0.0;
  double stderrAtMax = 0.0;
};

/// Monte Carlo check of the matrix-element orthogonality relation between two
/// representations over Haar-random unitaries. Representations must come from
/// the explicitly constructible family (m_1 <= 2, M <= 3).
HaarResidual haarOrthogonalityResidual(const Representation& repA, const Representation& repB, int M,
                                       long long samples, std::uint64_t seed);

/// Haar-distributed unitary via QR of a complex Gaussian matrix with
/// phase-normalized R diagonal.
ComplexMatrix haarUnitary(int M, SubstreamRng& rng);

/// Explicit representation matrix for the constructible family:
/// symmetric / antisymmetric tensor squares and determinant twists.
ComplexMatrix representationMatrix(const Representation& rep, const ComplexMatrix& u);

/// All representation labels with M parts and m_1 <= cutoff, in
/// colexicographic order (deterministic test output).
std::vector<Representation> representationsUpTo(int M, int cutoff);

/// Schur-polynomial character oracle: sum over semistandard Young tableaux.
Cplx schurPolynomial(const std::vector<int>& shape, const std::vector<Cplx>& a);

/// Eigenvalues of a general complex matrix of dimension <= 3 via
/// characteristic-polynomial roots (for the expansion checks only).
std::vector<Cplx> smallMatrixEigenvalues(const ComplexMatrix& a);

}  // namespace mimostat::groupcheck
