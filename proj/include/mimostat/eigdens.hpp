#pragma once

#include <atomic>
#include <functional>
#include <span>

#include "mimostat/channels.hpp"

namespace mimostat::eigdens {

using channels::ChannelSpec;
using numkit::ComplexMatrix;

/// Joint density of the N nonzero eigenvalues of G^dagger G.
struct JointDensity {
  ChannelSpec spec;
  int N = 1;
  std::function<double(std::span<const double>)> evaluator;

  double operator()(std::span<const double> lambda) const { return evaluator(lambda); }
};

JointDensity densityIid(int nt, int nr);

/// Both antenna orderings; degenerate transmit spectra (e.g. T = I) are
/// handled through the confluent ratio engine.
JointDensity densitySemiCorr(const ComplexMatrix& T, int nt, int nr,
                             double mergeTol = numkit::kDefaultMergeTol,
                             const quadrature::QuadratureSettings& qs = {});

/// Nonzero-mean (Rician) ensemble; the nonzero eigenvalues of G0^dagger G0
/// are detected with a 1e-12 relative threshold.
JointDensity densityNonzeroMean(const ComplexMatrix& G0, int nt, int nr,
                                double mergeTol = numkit::kDefaultMergeTol);

/// Dispatch on the channel variant. The fully correlated ensemble has no
/// closed-form joint density in this framework; requesting it reports that
/// the moment-generating-function pathway must be used instead.
JointDensity densityFor(const ChannelSpec& spec, double mergeTol = numkit::kDefaultMergeTol);

namespace testhooks {
/// Deliberate-fault switch for the validation harness: flips the sign of
/// every closed-form density so the nonnegativity check must fail.
inline std::atomic<bool> densitySignFlip{false};
}  // namespace testhooks

}  // namespace mimostat::eigdens
