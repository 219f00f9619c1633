#pragma once

#include <variant>
#include <vector>

#include "mimostat/channels.hpp"

namespace mimostat::mcsim {

using channels::ChannelSpec;
using numkit::ComplexMatrix;

/// log det(I + G^dagger G) in nats.
double mutualInformation(const ComplexMatrix& g);

struct McEstimate {
  long long n = 0;
  Cplx mean{0.0, 0.0};
  double variance = 0.0;  // unbiased, of |X - mean|
  double stderrOfMean = 0.0;
  std::uint64_t seed = 0;
};

struct MeanI {};
struct SecondMomentI {};
struct MgfAt {
  Cplx z;
};
struct Exceedance {
  double iOut;
};
using Functional = std::variant<MeanI, SecondMomentI, MgfAt, Exceedance>;

/// i.i.d. draws through channels::sampleChannel; streaming mean/variance.
/// (det(I+G^dagger G))^z is averaged as exp(z I) with I real, which is
/// branch-free since det(I+G^dagger G) >= 1.
McEstimate estimate(const ChannelSpec& spec, const Functional& f, long long n, std::uint64_t seed);

/// One pass over n draws, counting exceedances for every grid point.
std::vector<McEstimate> empiricalSurvival(const ChannelSpec& spec, const std::vector<double>& iOutGrid,
                                          long long n, std::uint64_t seed);

}  // namespace mimostat::mcsim
