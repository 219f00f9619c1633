#include "mimostat/mcsim.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

namespace mimostat::mcsim {

double mutualInformation(const ComplexMatrix& g) {
  const ComplexMatrix w = g.adjoint() * g;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(w, Eigen::EigenvaluesOnly);
  double sum = 0.0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
    sum += std::log1p(std::max(es.eigenvalues()(i), 0.0));
  return sum;
}

namespace {

struct Welford {
  long long n = 0;
  Cplx mean{0.0, 0.0};
  double m2 = 0.0;

  void add(Cplx x) {
    ++n;
    const Cplx delta = x - mean;
    mean += delta / static_cast<double>(n);
    m2 += std::norm(delta) * static_cast<double>(n - 1) / static_cast<double>(n);
  }
  McEstimate finish(std::uint64_t seed) const {
    if (n < 2) throw ContractError("McEstimate: need n >= 2");
    McEstimate e;
    e.n = n;
    e.mean = mean;
    e.variance = m2 / static_cast<double>(n - 1);
    e.stderrOfMean = std::sqrt(e.variance / static_cast<double>(n));
    e.seed = seed;
    return e;
  }
};

}  // namespace

McEstimate estimate(const ChannelSpec& spec, const Functional& f, long long n, std::uint64_t seed) {
  if (n < 100) throw ContractError("estimate: need n >= 100");
  channels::ChannelSampler sampler(spec);
  Welford acc;
  for (long long i = 0; i < n; ++i) {
    const double info = mutualInformation(sampler.draw(seed, static_cast<std::uint64_t>(i)));
    Cplx v;
    if (std::holds_alternative<MeanI>(f)) {
      v = Cplx(info, 0.0);
    } else if (std::holds_alternative<SecondMomentI>(f)) {
      v = Cplx(info * info, 0.0);
    } else if (const MgfAt* m = std::get_if<MgfAt>(&f)) {
      v = std::exp(m->z * info);
    } else {
      v = Cplx(info > std::get<Exceedance>(f).iOut ? 1.0 : 0.0, 0.0);
    }
    acc.add(v);
  }
  return acc.finish(seed);
}

std::vector<McEstimate> empiricalSurvival(const ChannelSpec& spec, const std::vector<double>& iOutGrid,
                                          long long n, std::uint64_t seed) {
  if (iOutGrid.empty()) throw ContractError("empiricalSurvival: grid must be nonempty");
  for (std::size_t i = 1; i < iOutGrid.size(); ++i)
    if (!(iOutGrid[i] > iOutGrid[i - 1])) throw ContractError("empiricalSurvival: grid must be increasing");
  if (n < 2) throw ContractError("empiricalSurvival: need n >= 2");

  channels::ChannelSampler sampler(spec);
  std::vector<long long> counts(iOutGrid.size(), 0);
  for (long long i = 0; i < n; ++i) {
    const double info = mutualInformation(sampler.draw(seed, static_cast<std::uint64_t>(i)));
    for (std::size_t g = 0; g < iOutGrid.size(); ++g) {
      if (info > iOutGrid[g])
        ++counts[g];
      else
        break;  // grid increasing: later thresholds cannot be exceeded either
    }
  }
  std::vector<McEstimate> out(iOutGrid.size());
  for (std::size_t g = 0; g < iOutGrid.size(); ++g) {
    const double p = static_cast<double>(counts[g]) / static_cast<double>(n);
    McEstimate e;
    e.n = n;
    e.mean = Cplx(p, 0.0);
    e.variance = p * (1.0 - p) * static_cast<double>(n) / static_cast<double>(n - 1);
    e.stderrOfMean = std::sqrt(e.variance / static_cast<double>(n));
    e.seed = seed;
    out[g] = e;
  }
  return out;
}

}  // namespace mimostat::mcsim
