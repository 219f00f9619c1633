#pragma once

#include "mimostat/numkit.hpp"
#include "mimostat/quadrature.hpp"

namespace mimostat::ustm {

using numkit::ComplexMatrix;

/// Unitary space-time transmission over a block-constant channel with
/// transmit-side correlation T; X is an nt x T_coh row-isometry.
struct UstmConfig {
  int Tcoh = 2;
  int nt = 1;
  int nr = 1;
  ComplexMatrix T;  // nt x nt Hermitian PD

  void validate() const;
  int Q() const { return std::min(Tcoh, nr); }
};

/// Eigenvalues T_i of T mapped to t_i = T_i/(1+T_i), zero-padded to length
/// T_coh; the padding zeros form a structural degeneracy cluster.
struct MappedSpectrum {
  std::vector<double> values;  // nt mapped values, in (0,1)
  int paddingZeros = 0;
};

MappedSpectrum mappedSpectrum(const UstmConfig& cfg, double mergeTol = numkit::kDefaultMergeTol);

/// Marginal received-signal density p(Y) (Lebesgue density, includes the
/// 1/pi^{T nr} Gaussian measure factor). Structural zero clusters of both the
/// mapped correlation spectrum and the eigenvalues of Y^dagger Y, as well as
/// accidental degeneracies, go through the confluent ratio engine.
double receivedDensity(const UstmConfig& cfg, const ComplexMatrix& Y,
                       double mergeTol = numkit::kDefaultMergeTol);

/// Conditional Gaussian density p(Y|X) for a row-isometric X
/// (X X^dagger = I_nt within 1e-10).
double conditionalDensity(const UstmConfig& cfg, const ComplexMatrix& Y, const ComplexMatrix& X);

/// First nt rows of a Haar unitary of dimension T_coh.
ComplexMatrix sampleIsometry(int nt, int Tcoh, std::uint64_t seed, std::uint64_t index = 0);

}  // namespace mimostat::ustm
