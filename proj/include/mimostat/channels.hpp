#pragma once

#include <optional>
#include <utility>

#include "mimostat/numkit.hpp"
#include "mimostat/quadrature.hpp"

namespace mimostat::channels {

using numkit::ComplexMatrix;
using numkit::Spectrum;

/// Uniform linear array with a Gaussian power azimuth spectrum.
struct ArrayGeometry {
  int antennaCount = 1;
  double dLambda = 0.5;   // nearest-neighbor spacing in wavelengths
  double deltaDeg = 10.0; // angle spread in degrees

  void validate() const {
    if (antennaCount < 1) throw ContractError("ArrayGeometry: antennaCount >= 1 required");
    if (dLambda < 0.0) throw ContractError("ArrayGeometry: spacing must be nonnegative");
    if (!(deltaDeg > 0.0)) throw ContractError("ArrayGeometry: angle spread must be positive");
  }
};

/// T_ab = int_{-180}^{180} dphi/sqrt(2 pi delta^2)
///          exp(2 pi i (a-b) d sin(phi pi/180) - phi^2/(2 delta^2)),
/// Hermitian Toeplitz by construction.
ComplexMatrix correlationMatrix(const ArrayGeometry& geom);

enum class ChannelKind { Iid, SemiCorrelated, NonzeroMean, FullyCorrelated };

/// Channel matrix ensemble: G is nr x nt; T (nt x nt) is the transmit-side
/// correlation and R (nr x nr) the receive-side one; the density exponent is
/// tr[R^{-1} G T^{-1} G^dagger] with normalization det(T)^nr det(R)^nt.
struct ChannelSpec {
  ChannelKind kind = ChannelKind::Iid;
  int nt = 1;
  int nr = 1;
  ComplexMatrix T;   // semicorrelated / fully correlated
  ComplexMatrix R;   // fully correlated
  ComplexMatrix G0;  // nonzero mean

  int M() const { return std::max(nt, nr); }
  int N() const { return std::min(nt, nr); }

  static ChannelSpec makeIid(int nt, int nr);
  static ChannelSpec makeSemiCorrelated(ComplexMatrix T, int nr);
  static ChannelSpec makeNonzeroMean(ComplexMatrix G0);
  static ChannelSpec makeFullyCorrelated(ComplexMatrix T, ComplexMatrix R);
};

/// Inverse-eigenvalue spectra (t, r) of the correlation matrices, descending,
/// with degeneracy clusters. r is the unit spectrum for the semicorrelated
/// variant. Rejects the Iid and NonzeroMean variants.
std::pair<Spectrum, Spectrum> invEigs(const ChannelSpec& spec, double mergeTol = numkit::kDefaultMergeTol);

/// One draw of G for the given substream index; independent of worker count.
ComplexMatrix sampleChannel(const ChannelSpec& spec, std::uint64_t seed, std::uint64_t draw = 0);

/// Caches the matrix square roots so repeated draws stay cheap.
class ChannelSampler {
 public:
  explicit ChannelSampler(const ChannelSpec& spec);
  ComplexMatrix draw(std::uint64_t seed, std::uint64_t index) const;
  const ChannelSpec& spec() const { return spec_; }

 private:
  ChannelSpec spec_;
  ComplexMatrix sqrtT_, sqrtR_;
};

}  // namespace mimostat::channels
