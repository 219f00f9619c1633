#include "mimostat/mgfcap.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <algorithm>
#include <cmath>

#include "mimostat/specfun.hpp"

namespace mimostat::mgfcap {

using channels::ChannelKind;
using numkit::ColumnFn;
using numkit::Kernel2;
using numkit::MatrixL;
using numkit::Nodes;

namespace {

long double toRealL(CplxL v, const char* where) {
  if (std::abs(v.imag()) > 1e-9L * (1.0L + std::abs(v.real())))
    throw NumericError(std::string(where) + ": unexpected imaginary part");
  return v.real();
}

// ---------------------------------------------------------------------------
// Column builders
// ---------------------------------------------------------------------------

// Psi(a, a+z+1, t) column with analytic t-derivatives.
ColumnFn psiColumn(int a, Cplx z, const QuadratureSettings& qs) {
  return [a, z, qs](int order, CplxL t) -> CplxL {
    const double tv = static_cast<double>(toRealL(t, "psiColumn"));
    const Cplx v = specfun::tricomiPsiDeriv(order, a, Cplx(a + 1, 0.0) + z, tv, qs);
    return CplxL(v.real(), v.imag());
  };
}

// d/dz Psi(a, a+z+1, t) at z = 0, with analytic t-derivatives.
ColumnFn psiLnColumn(int a, const QuadratureSettings& qs) {
  return [a, qs](int order, CplxL t) -> CplxL {
    const double tv = static_cast<double>(toRealL(t, "psiLnColumn"));
    return CplxL(specfun::psiLnIntegralDeriv(order, a, tv, qs), 0.0L);
  };
}

// Mixed partials of F(t*x; z) (or of its z-derivative at z=0 when dz is set).
Kernel2 capacityKernel(Cplx z, int M, const QuadratureSettings& qs, bool dz) {
  return [z, M, qs, dz](int a, int b, CplxL t, CplxL x) -> CplxL {
    const double tv = static_cast<double>(toRealL(t, "capacityKernel"));
    const double xv = static_cast<double>(toRealL(x, "capacityKernel"));
    const double u = tv * xv;
    CplxL sum = 0.0L;
    for (int k = 0; k <= std::min(a, b); ++k) {
      long double binomAK = 1.0L;
      for (int j = 1; j <= k; ++j) binomAK *= static_cast<long double>(a - k + j) / j;
      long double fallBK = 1.0L;
      for (int j = 0; j < k; ++j) fallBK *= static_cast<long double>(b - j);
      if (k > 0 && fallBK == 0.0L) continue;
      Cplx fd;
      if (dz) {
        fd = Cplx(specfun::kernelFdzDeriv(a + b - k, u, M, qs), 0.0);
      } else {
        fd = specfun::kernelFDeriv(a + b - k, u, z, M, qs);
      }
      sum += binomAK * fallBK * ipow(CplxL(tv, 0.0L), b - k) * ipow(CplxL(xv, 0.0L), a - k) * CplxL(fd.real(), fd.imag());
    }
    return sum;
  };
}

// Rice rows: int_0^inf lam^{j-1} (1+lam)^z e^{-lam} d^a/dgamma^a h_nu(gamma, lam) dlam
Cplx riceMomentIntegral(int nu, int power, Cplx z, int order, double gamma, const QuadratureSettings& qs) {
  auto f = [&](double lam) -> Cplx {
    const CplxL b = specfun::besselOrderMixedPartial(nu, order, 0, CplxL(gamma, 0.0L), CplxL(lam, 0.0L));
    Cplx v = std::exp(z * std::log1p(lam) - lam);
    v *= ipow(Cplx(lam, 0.0), power);
    return v * Cplx(static_cast<double>(b.real()), static_cast<double>(b.imag()));
  };
  const double sg = std::sqrt(std::max(gamma, 0.0));
  double L = (sg + 8.0) * (sg + 8.0);
  L = std::max(L, 45.0 + 3.0 * (std::fabs(z.real()) + power));
  std::vector<double> seeds;
  for (double s = std::max(gamma, 1.0) * 0.25; s < L; s *= 2.0) seeds.push_back(s);
  if (gamma > 0.0) seeds.push_back(gamma);
  auto res = quadrature::adaptiveGK(f, 0.0, L, qs, seeds);
  if (!res.converged) throw NumericError("mgf: Rice moment integral did not converge");
  return res.value;
}

struct ScaledMgf {
  ScaledValue v;
  MgfMethod method;
};

// ---------------------------------------------------------------------------
// Variant assemblies
// ---------------------------------------------------------------------------

std::vector<ColumnFn> semicorrColumns(int nt, int nr, Cplx z, const EvalOptions& opts, bool dzColumnsOnly = false) {
  std::vector<ColumnFn> cols;
  for (int j = 1; j <= nt - nr; ++j) cols.push_back(numkit::monomialColumn(j - 1));
  for (int j = std::max(0, nt - nr) + 1; j <= nt; ++j) {
    const int a = nr - nt + j;
    cols.push_back(dzColumnsOnly ? psiLnColumn(a, opts.quad) : psiColumn(a, z, opts.quad));
  }
  return cols;
}

ScaledMgf mgfSemicorrScaled(const numkit::Spectrum& tSpec, int nt, int nr, Cplx z, const EvalOptions& opts,
                            MgfMethod tag) {
  const Nodes tNodes = Nodes::fromSpectrum(tSpec);
  ScaledValue v = numkit::confluentRatioDet(tNodes, semicorrColumns(nt, nr, z, opts));
  long double logPref = 0.0L;
  for (double t : tSpec.values) logPref += nr * std::log(static_cast<long double>(t));
  v.scaleLog(logPref);
  // Sign carried over from the joint-density prefactor through the
  // determinant-unzipping integration. For nt > nr the extra
  // (-1)^{p(p-1)/2}, p = nt-nr, comes from the zero-padding limit; it is
  // invisible for p <= 1 and required for p >= 2 (g(0) = 1 pins it).
  const int p = std::max(0, nt - nr);
  const long long sgn = static_cast<long long>(nt) * (nt - 1) / 2 + static_cast<long long>(p) * (p - 1) / 2;
  if (sgn % 2 != 0) v *= CplxL(-1.0L, 0.0L);
  return {v, tag};
}

ScaledMgf mgfFullcorrScaled(const ChannelSpec& spec, Cplx z, const EvalOptions& opts) {
  const auto [tSpec, rSpec] = channels::invEigs(spec, opts.mergeTol);
  const bool tBig = spec.nt >= spec.nr;
  const numkit::Spectrum& big = tBig ? tSpec : rSpec;
  const numkit::Spectrum& small = tBig ? rSpec : tSpec;
  const int M = spec.M();
  const int N = spec.N();

  const Nodes rows = Nodes::fromSpectrum(big);
  const Nodes xNodes = Nodes::fromSpectrum(small);
  std::vector<ColumnFn> extras;
  for (int j = N + 1; j <= M; ++j) extras.push_back(numkit::monomialColumn(j - 1));

  ScaledValue v = numkit::bivariateRatioDet(rows, capacityKernel(z, M, opts.quad, false), xNodes, extras);

  ScaledValue pref = ScaledValue::one();
  for (int j = 1; j <= M - N - 1; ++j) pref *= ipow(CplxL(M - j, 0.0L) + CplxL(z.real(), z.imag()), M - N - j);
  for (int i = 2; i <= M; ++i) {
    const CplxL base = CplxL(z.real(), z.imag()) + CplxL(i - 1, 0.0L);
    pref.divideBy(ScaledValue::of(ipow(base, i - 1)));
  }
  v *= pref;
  return {v, MgfMethod::FullCorr};
}

struct NzMeanData {
  std::vector<double> gamma;
  int N0 = 0;
  Nodes gNodes;
  long double logPref = 0.0L;
  double signFactor = 1.0;
  int M = 0, N = 0;
};

NzMeanData nzMeanSetup(const ChannelSpec& spec, double mergeTol) {
  NzMeanData d;
  d.M = spec.M();
  d.N = spec.N();
  Eigen::SelfAdjointEigenSolver<numkit::ComplexMatrix> es(spec.G0.adjoint() * spec.G0, Eigen::EigenvaluesOnly);
  const double gmax = std::max(es.eigenvalues().maxCoeff(), 0.0);
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    const double g = es.eigenvalues()(i);
    if (g > 1e-12 * std::max(gmax, 1.0)) d.gamma.push_back(g);
  }
  d.N0 = static_cast<int>(d.gamma.size());
  d.gNodes = Nodes::fromReal(d.gamma, mergeTol);
  d.gNodes.appendCluster(Cplx(0.0, 0.0), d.N - d.N0);

  long double lp = 0.0L;
  for (double g : d.gamma) lp -= g;
  d.logPref = lp;
  d.signFactor = 1.0;
  return d;
}

// Moment columns of the density integration: unzipping the N-fold lambda
// integral of Delta(lambda) det[h_nu(gamma_i, lambda_j)] against
// (1+lambda)^z e^{-lambda} gives det of these gamma-functions over the
// (possibly degenerate) gamma nodes. See densityNonzeroMean for the kernel
// convention (Bessel order nu = M - N).
std::vector<ColumnFn> nzMeanFunctions(const NzMeanData& d, Cplx z, const EvalOptions& opts) {
  std::vector<ColumnFn> fns;
  const QuadratureSettings qs = opts.quad;
  const int nu = d.M - d.N;
  for (int i = 1; i <= d.N; ++i) {
    fns.push_back([i, nu, z, qs](int order, CplxL g) -> CplxL {
      const double gv = static_cast<double>(toRealL(g, "nzMean"));
      const Cplx val = riceMomentIntegral(nu, i - 1, z, order, gv, qs);
      return {val.real(), val.imag()};
    });
  }
  return fns;
}

ScaledMgf mgfNzMeanScaled(const ChannelSpec& spec, Cplx z, const EvalOptions& opts) {
  const NzMeanData d = nzMeanSetup(spec, opts.mergeTol);
  ScaledValue v = numkit::confluentRatioDet(d.gNodes, nzMeanFunctions(d, z, opts));
  v.scaleLog(d.logPref);
  return {v, MgfMethod::Rician};
}

ScaledMgf mgfScaled(const ChannelSpec& spec, Cplx z, const EvalOptions& opts) {
  if (!(z.real() > -1.0)) throw ContractError("mgf: Re(z) must exceed -1 (defining integrals diverge)");
  switch (spec.kind) {
    case ChannelKind::Iid: {
      const auto t = numkit::Spectrum::fromValues(std::vector<double>(spec.nt, 1.0), opts.mergeTol);
      return mgfSemicorrScaled(t, spec.nt, spec.nr, z, opts, MgfMethod::Iid);
    }
    case ChannelKind::SemiCorrelated: {
      const auto [t, r] = channels::invEigs(spec, opts.mergeTol);
      return mgfSemicorrScaled(t, spec.nt, spec.nr, z, opts, MgfMethod::SemiCorr);
    }
    case ChannelKind::NonzeroMean:
      return mgfNzMeanScaled(spec, z, opts);
    case ChannelKind::FullyCorrelated:
      return mgfFullcorrScaled(spec, z, opts);
  }
  throw ContractError("mgf: unknown variant");
}

// Sum over z-dependent columns of det(L with that column z-differentiated)/det L,
// evaluated by LU solves (Cramer ratios).
double columnDerivativeSum(const Nodes& rows, const std::vector<ColumnFn>& base,
                           const std::vector<std::pair<int, ColumnFn>>& replacements) {
  const int n = rows.dim();
  MatrixL L(n, n);
  int r = 0;
  for (const auto& cl : rows.clusters)
    for (int a = 0; a < cl.multiplicity; ++a, ++r)
      for (int c = 0; c < n; ++c) L(r, c) = base[c](a, cl.value);
  Eigen::PartialPivLU<MatrixL> lu(L);
  long double total = 0.0L;
  for (const auto& [col, fn] : replacements) {
    Eigen::Matrix<CplxL, Eigen::Dynamic, 1> d(n);
    r = 0;
    for (const auto& cl : rows.clusters)
      for (int a = 0; a < cl.multiplicity; ++a, ++r) d(r) = fn(a, cl.value);
    const Eigen::Matrix<CplxL, Eigen::Dynamic, 1> x = lu.solve(d);
    total += toRealL(x(col), "columnDerivativeSum");
  }
  return static_cast<double>(total);
}

double ergodicSemicorr(const numkit::Spectrum& tSpec, int nt, int nr, const EvalOptions& opts) {
  const Nodes rows = Nodes::fromSpectrum(tSpec);
  const auto base = semicorrColumns(nt, nr, Cplx(0.0, 0.0), opts);
  std::vector<std::pair<int, ColumnFn>> repl;
  for (int j = std::max(0, nt - nr) + 1; j <= nt; ++j) {
    const int a = nr - nt + j;
    repl.push_back({j - 1, psiLnColumn(a, opts.quad)});
  }
  return columnDerivativeSum(rows, base, repl);
}

double ergodicFullcorr(const ChannelSpec& spec, const EvalOptions& opts) {
  const auto [tSpec, rSpec] = channels::invEigs(spec, opts.mergeTol);
  const bool tBig = spec.nt >= spec.nr;
  const numkit::Spectrum& big = tBig ? tSpec : rSpec;
  const numkit::Spectrum& small = tBig ? rSpec : tSpec;
  const int M = spec.M();
  const int N = spec.N();

  const Nodes rows = Nodes::fromSpectrum(big);
  const Nodes xNodes = Nodes::fromSpectrum(small);
  const Kernel2 k0 = capacityKernel(Cplx(0.0, 0.0), M, opts.quad, false);
  const Kernel2 kd = capacityKernel(Cplx(0.0, 0.0), M, opts.quad, true);

  std::vector<ColumnFn> base;
  std::vector<std::pair<int, ColumnFn>> repl;
  int col = 0;
  for (const auto& xc : xNodes.clusters) {
    for (int b = 0; b < xc.multiplicity; ++b, ++col) {
      const CplxL xv = xc.value;
      base.push_back([&k0, b, xv](int a, CplxL t) { return k0(a, b, t, xv); });
      repl.push_back({col, [&kd, b, xv](int a, CplxL t) { return kd(a, b, t, xv); }});
    }
  }
  for (int j = N + 1; j <= M; ++j, ++col) base.push_back(numkit::monomialColumn(j - 1));

  double sum = columnDerivativeSum(rows, base, repl);
  for (int j = 1; j <= M - N - 1; ++j) sum += static_cast<double>(j) / (N + j);
  sum -= M - 1;
  return sum;
}

double richardsonFirstDerivative(const ChannelSpec& spec, const EvalOptions& opts) {
  // central differences at h and h/2 with one Richardson step (per-variant g)
  const double h = 1e-4;
  auto gAt = [&](double z) { return mgfScaled(spec, Cplx(z, 0.0), opts).v.value().real(); };
  const double d1 = (gAt(h) - gAt(-h)) / (2.0 * h);
  const double d2 = (gAt(h / 2) - gAt(-h / 2)) / h;
  return (4.0 * d2 - d1) / 3.0;
}

}  // namespace

MgfSample mgf(const ChannelSpec& spec, Cplx z, const EvalOptions& opts) {
  const ScaledMgf s = mgfScaled(spec, z, opts);
  MgfSample out;
  out.z = z;
  out.method = s.method;
  out.detLogScale = static_cast<double>(s.v.logAbs);
  out.value = s.v.value();
  if (!std::isfinite(out.value.real()) || !std::isfinite(out.value.imag()))
    throw NumericError("mgf: non-finite value");
  return out;
}

double ergodicCapacity(const ChannelSpec& spec, const EvalOptions& opts) {
  switch (spec.kind) {
    case ChannelKind::Iid: {
      const auto t = numkit::Spectrum::fromValues(std::vector<double>(spec.nt, 1.0), opts.mergeTol);
      return ergodicSemicorr(t, spec.nt, spec.nr, opts);
    }
    case ChannelKind::SemiCorrelated: {
      const auto [t, r] = channels::invEigs(spec, opts.mergeTol);
      return ergodicSemicorr(t, spec.nt, spec.nr, opts);
    }
    case ChannelKind::FullyCorrelated:
      return ergodicFullcorr(spec, opts);
    case ChannelKind::NonzeroMean:
      return richardsonFirstDerivative(spec, opts);
  }
  throw ContractError("ergodicCapacity: unknown variant");
}

double mgfDerivativeAtZero(const ChannelSpec& spec, int order, const EvalOptions& opts) {
  if (order == 1) return ergodicCapacity(spec, opts);
  if (order != 2) throw ContractError("mgfDerivativeAtZero: order must be 1 or 2");
  auto gAt = [&](double z) { return mgfScaled(spec, Cplx(z, 0.0), opts).v.value().real(); };
  const double g0 = gAt(0.0);
  auto second = [&](double h) { return (gAt(h) - 2.0 * g0 + gAt(-h)) / (h * h); };
  const double h = 0.02;
  const double d1 = second(h);
  const double d2 = second(h / 2);
  const double d3 = second(h / 4);
  const double r1 = (4.0 * d2 - d1) / 3.0;
  const double r2 = (4.0 * d3 - d2) / 3.0;
  if (std::fabs(r2 - r1) > std::fabs(d2 - d1) + 1e-6)
    throw NumericError("mgfDerivativeAtZero: non-decreasing Richardson tail");
  return (16.0 * r2 - r1) / 15.0;
}

double mutualInformationVariance(const ChannelSpec& spec, const EvalOptions& opts) {
  const double m1 = mgfDerivativeAtZero(spec, 1, opts);
  const double m2 = mgfDerivativeAtZero(spec, 2, opts);
  return m2 - m1 * m1;
}

// ---------------------------------------------------------------------------
// Outage inversion
// ---------------------------------------------------------------------------

namespace {

// Iterated-averaging (Euler) acceleration of a partial-sum sequence.
double eulerAccelerate(const std::vector<double>& partials, double& correction) {
  const int keep = std::min<int>(24, static_cast<int>(partials.size()));
  std::vector<double> row(partials.end() - keep, partials.end());
  double prev = row.back();
  while (row.size() > 1) {
    for (std::size_t i = 0; i + 1 < row.size(); ++i) row[i] = 0.5 * (row[i] + row[i + 1]);
    row.pop_back();
    correction = std::fabs(row.back() - prev);
    prev = row.back();
  }
  return row.front();
}

}  // namespace

std::vector<OutageResult> outageCurve(const ChannelSpec& spec, const std::vector<double>& iOutGrid,
                                      const OutageQuery& proto, const EvalOptions& opts) {
  proto.validate();
  for (double i : iOutGrid)
    if (i < 0.0) throw ContractError("outageCurve: thresholds must be nonnegative");
  const std::size_t nq = iOutGrid.size();
  std::vector<OutageResult> results(nq);
  if (nq == 0) return results;

  const double mu = ergodicCapacity(spec, opts);
  double omega = 1.0;
  for (double i : iOutGrid) omega = std::max(omega, std::fabs(i - mu));
  const double h = M_PI / (omega + 1.0);

  std::vector<std::vector<double>> partials(nq);
  std::vector<double> running(nq, 0.0);
  std::vector<double> quadErr(nq, 0.0);
  std::vector<bool> settled(nq, false);
  std::vector<double> accel(nq, 0.0), accelErr(nq, 1e9);

  int panel = 0;
  double gMod = 1.0;
  const int panelCap = (proto.maxFrequency > 0.0)
                           ? std::min(proto.maxPanels, static_cast<int>(std::ceil(proto.maxFrequency / h)))
                           : proto.maxPanels;
  bool allSettled = false;
  for (; panel < panelCap && !allSettled; ++panel) {
    const double a = panel * h;
    const double b = a + h;
    // one shared set of g(iu) evaluations per panel
    std::vector<double> us;
    std::vector<Cplx> gs;
    us.reserve(15);
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    us.push_back(mid);
    for (int i = 1; i < 8; ++i) {
      const double dx = half * quadrature::detail::kGK15Nodes[i];
      us.push_back(mid + dx);
      us.push_back(mid - dx);
    }
    gs.reserve(us.size());
    for (double u : us) gs.push_back(mgfScaled(spec, Cplx(0.0, u), opts).v.value());
    gMod = std::abs(gs[0]);

    for (std::size_t q = 0; q < nq; ++q) {
      if (settled[q]) continue;
      auto integrand = [&](std::size_t idx) {
        const double u = us[idx];
        const Cplx v = gs[idx] * std::exp(Cplx(0.0, -u * iOutGrid[q]));
        return v.imag() / u;
      };
      double k15 = integrand(0) * quadrature::detail::kGK15Weights[0];
      double g7 = integrand(0) * quadrature::detail::kG7Weights[0];
      std::size_t idx = 1;
      for (int i = 1; i < 8; ++i) {
        const double s = integrand(idx) + integrand(idx + 1);
        idx += 2;
        k15 += s * quadrature::detail::kGK15Weights[i];
        if (quadrature::detail::kG7Weights[i] != 0.0) g7 += s * quadrature::detail::kG7Weights[i];
      }
      k15 *= half;
      g7 *= half;
      quadErr[q] += std::fabs(k15 - g7);
      running[q] += k15;
      partials[q].push_back(running[q]);
      if (partials[q].size() >= 12) {
        double corr = 0.0;
        accel[q] = eulerAccelerate(partials[q], corr);
        accelErr[q] = corr;
        if ((corr < 1e-8 && panel >= 24) || gMod < 1e-10) settled[q] = true;
      }
    }
    if (gMod < 1e-10 && panel >= 8) break;
    allSettled = true;
    for (std::size_t q = 0; q < nq; ++q) allSettled = allSettled && settled[q];
  }

  for (std::size_t q = 0; q < nq; ++q) {
    double total, err;
    if (gMod < 1e-10) {
      // tail negligible: plain truncated sum is already accurate
      total = running[q];
      err = quadErr[q] + gMod;
    } else {
      double corr = 0.0;
      total = partials[q].size() >= 4 ? eulerAccelerate(partials[q], corr) : running[q];
      err = quadErr[q] + corr;
    }
    OutageResult& r = results[q];
    r.exceedance = 0.5 + total / M_PI;
    r.cdf = 1.0 - r.exceedance;
    r.errorEstimate = err / M_PI;
    r.panels = panel;
    r.converged = (gMod < 1e-10) || (err / M_PI < 1e-5) || settled[q];
  }
  return results;
}

OutageResult outage(const ChannelSpec& spec, const OutageQuery& q, const EvalOptions& opts) {
  return outageCurve(spec, {q.iOut}, q, opts).front();
}

}  // namespace mimostat::mgfcap
