#pragma once

#include <map>
#include <vector>

#include "mimostat/channels.hpp"

namespace mimostat::mgfcap {

using channels::ChannelSpec;
using quadrature::QuadratureSettings;

struct EvalOptions {
  QuadratureSettings quad;
  double mergeTol = numkit::kDefaultMergeTol;
};

enum class MgfMethod { Iid, SemiCorr, Rician, FullCorr };

struct MgfSample {
  Cplx z;
  Cplx value;
  MgfMethod method = MgfMethod::Iid;
  /// log-scale of the determinant factors that were composed (conditioning report)
  double detLogScale = 0.0;
};

/// Moment generating function g(z) = E[(det(I + G^dagger G))^z], Re z > -1.
MgfSample mgf(const ChannelSpec& spec, Cplx z, const EvalOptions& opts = {});

/// E[I] in nats. Analytic column-derivative formulas for the i.i.d.,
/// semicorrelated and fully correlated ensembles; Richardson finite
/// differences of g for the nonzero-mean ensemble.
double ergodicCapacity(const ChannelSpec& spec, const EvalOptions& opts = {});

/// order 1: E[I]; order 2: E[I^2] by second central differences with
/// Richardson refinement. Throws NumericError on a non-decreasing
/// Richardson tail.
double mgfDerivativeAtZero(const ChannelSpec& spec, int order, const EvalOptions& opts = {});

/// Var[I] = E[I^2] - E[I]^2.
double mutualInformationVariance(const ChannelSpec& spec, const EvalOptions& opts = {});

struct OutageQuery {
  double iOut = 0.0;
  double maxFrequency = 0.0;  // 0: choose from |g(iu)| decay
  int maxPanels = 10000;
  enum class Convention { Exceedance, Cdf } convention = Convention::Cdf;

  void validate() const {
    if (iOut < 0.0) throw ContractError("OutageQuery: I_out must be nonnegative");
    if (maxPanels < 1) throw ContractError("OutageQuery: grid parameters must be positive");
  }
};

struct OutageResult {
  double exceedance = 0.0;  // P(I > I_out)
  double cdf = 0.0;         // P(I < I_out)
  double errorEstimate = 0.0;
  int panels = 0;
  bool converged = false;

  double value(OutageQuery::Convention c) const {
    return c == OutageQuery::Convention::Exceedance ? exceedance : cdf;
  }
};

/// Characteristic-function inversion (principal value plus half residue at
/// the origin pole): P(I > I_out) = 1/2 + (1/pi) int_0^inf Im[g(iu) e^{-iu I_out}]/u du.
OutageResult outage(const ChannelSpec& spec, const OutageQuery& q, const EvalOptions& opts = {});

/// Shares the g(iu) evaluations across a whole threshold grid.
std::vector<OutageResult> outageCurve(const ChannelSpec& spec, const std::vector<double>& iOutGrid,
                                      const OutageQuery& proto = {}, const EvalOptions& opts = {});

}  // namespace mimostat::mgfcap
