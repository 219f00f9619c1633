#include "mimostat/clitasks.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include "mimostat/eigdens.hpp"
#include "mimostat/matio.hpp"
#include "mimostat/mcsim.hpp"
#include "mimostat/mgfcap.hpp"
#include "mimostat/ustm.hpp"
#include "mimostat/validate.hpp"

namespace mimostat::cli {

namespace {

using matio::formatDouble;

double toUnits(const RunConfig& cfg, double nats) { return cfg.bits ? nats / std::log(2.0) : nats; }

void header(const RunConfig& cfg, std::ostream& out, const std::string& columns) {
  std::ostringstream h;
  h << std::hex << cfg.hash();
  out << "# config_hash=" << h.str() << " seed=" << cfg.seed << '\n';
  out << columns << '\n';
}

std::vector<double> linspace(double lo, double hi, int n) {
  if (n < 1) throw ContractError("grid: need at least one point");
  std::vector<double> v;
  if (n == 1) {
    v.push_back(lo);
    return v;
  }
  for (int i = 0; i < n; ++i) v.push_back(lo + (hi - lo) * i / (n - 1));
  return v;
}

}  // namespace

int runMgf(const RunConfig& cfg, std::ostream& out) {
  const auto spec = cfg.buildSpec();
  const auto s = mgfcap::mgf(spec, Cplx(cfg.zRe, cfg.zIm));
  header(cfg, out, "z_re,z_im,g_re,g_im,det_log_scale");
  out << formatDouble(cfg.zRe) << ',' << formatDouble(cfg.zIm) << ',' << formatDouble(s.value.real()) << ','
      << formatDouble(s.value.imag()) << ',' << formatDouble(s.detLogScale) << '\n';
  return 0;
}

int runErgodic(const RunConfig& cfg, std::ostream& out) {
  const auto spec = cfg.buildSpec();
  const double ei = toUnits(cfg, mgfcap::ergodicCapacity(spec));
  header(cfg, out, std::string("ergodic_capacity_") + (cfg.bits ? "bits" : "nats"));
  out << formatDouble(ei) << '\n';
  return 0;
}

int runOutageCurve(const RunConfig& cfg, std::ostream& out) {
  const auto spec = cfg.buildSpec();
  std::vector<double> grid;
  if (cfg.iOutPoints > 1)
    grid = linspace(cfg.iOutMin, cfg.iOutMax, cfg.iOutPoints);
  else
    grid.push_back(cfg.iOut);
  for (double& g : grid)
    if (cfg.bits) g *= std::log(2.0);  // thresholds supplied in bits

  const auto curve = mgfcap::outageCurve(spec, grid);
  std::vector<mcsim::McEstimate> survival;
  if (cfg.mcN > 0) survival = mcsim::empiricalSurvival(spec, grid, cfg.mcN, cfg.seed);

  std::string cols = "i_out,exceedance,cdf,error_estimate";
  if (cfg.mcN > 0) cols += ",mc_survival,mc_stderr";
  header(cfg, out, cols);
  bool anyNonConverged = false;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double shown = cfg.bits ? grid[i] / std::log(2.0) : grid[i];
    out << formatDouble(shown) << ',' << formatDouble(curve[i].exceedance) << ',' << formatDouble(curve[i].cdf)
        << ',' << formatDouble(curve[i].errorEstimate);
    if (cfg.mcN > 0)
      out << ',' << formatDouble(survival[i].mean.real()) << ',' << formatDouble(survival[i].stderrOfMean);
    out << '\n';
    anyNonConverged = anyNonConverged || !curve[i].converged;
  }
  return anyNonConverged ? 3 : 0;
}

int runDensity(const RunConfig& cfg, std::ostream& out) {
  const auto spec = cfg.buildSpec();
  const auto dens = eigdens::densityFor(spec);
  const auto grid = linspace(cfg.lambdaMin, cfg.lambdaMax, cfg.lambdaPoints);
  if (dens.N == 1) {
    header(cfg, out, "lambda1,density");
    for (double l : grid) out << formatDouble(l) << ',' << formatDouble(dens(std::vector<double>{l})) << '\n';
    return 0;
  }
  if (dens.N == 2) {
    header(cfg, out, "lambda1,lambda2,density");
    for (double l1 : grid)
      for (double l2 : grid)
        out << formatDouble(l1) << ',' << formatDouble(l2) << ','
            << formatDouble(dens(std::vector<double>{l1, l2})) << '\n';
    return 0;
  }
  // higher dimensions: diagonal section lambda_i = l
  header(cfg, out, "lambda_diagonal,density");
  for (double l : grid) {
    std::vector<double> args(dens.N, l);
    for (int i = 0; i < dens.N; ++i) args[i] = l * (1.0 + 0.05 * i);  // avoid the exact coincident zero
    out << formatDouble(l) << ',' << formatDouble(dens(args)) << '\n';
  }
  return 0;
}

int runSimulate(const RunConfig& cfg, std::ostream& out) {
  const auto spec = cfg.buildSpec();
  const long long n = cfg.mcN > 0 ? cfg.mcN : 10000;
  const auto est = mcsim::estimate(spec, mcsim::MeanI{}, n, cfg.seed);
  header(cfg, out, std::string("mean_i_") + (cfg.bits ? "bits" : "nats") + ",stderr,n");
  out << formatDouble(toUnits(cfg, est.mean.real())) << ',' << formatDouble(toUnits(cfg, est.stderrOfMean)) << ','
      << est.n << '\n';
  return 0;
}

int runUstm(const RunConfig& cfg, std::ostream& out) {
  ustm::UstmConfig uc;
  uc.Tcoh = cfg.tcoh;
  uc.nt = cfg.nt;
  uc.nr = cfg.nr;
  uc.T = cfg.buildT();
  if (cfg.yFile.empty()) throw ContractError("ustm: y_file with the received matrix is required");
  const auto y = matio::readMatrixFile(cfg.yFile);
  const double p = ustm::receivedDensity(uc, y);
  header(cfg, out, "received_density");
  out << formatDouble(p) << '\n';
  return 0;
}

int runSweep(const RunConfig& cfg, std::ostream& out) {
  if (cfg.sweepVar != "d_lambda" && cfg.sweepVar != "delta" && cfg.sweepVar != "snr")
    throw ContractError("sweep: variable must be one of d_lambda, delta, snr");
  if (!(cfg.sweepMin > 0.0) || !(cfg.sweepMax >= cfg.sweepMin))
    throw ContractError("sweep: range must be positive and increasing");
  const auto grid = linspace(cfg.sweepMin, cfg.sweepMax, cfg.sweepPoints);

  std::string cols = "sweep_value,ergodic_fullcorr,ergodic_semicorr";
  if (cfg.mcN > 0) cols += ",mc_fullcorr,mc_fullcorr_stderr,mc_semicorr,mc_semicorr_stderr";
  header(cfg, out, cols);

  for (double v : grid) {
    RunConfig point = cfg;
    if (cfg.sweepVar == "d_lambda")
      point.dLambda = v;
    else if (cfg.sweepVar == "delta")
      point.delta = v;
    else
      point.snr = v;
    point.variant = "fullcorr";
    const auto full = point.buildSpec();
    point.variant = "semicorr";
    const auto semi = point.buildSpec();

    out << formatDouble(v) << ',' << formatDouble(toUnits(cfg, mgfcap::ergodicCapacity(full))) << ','
        << formatDouble(toUnits(cfg, mgfcap::ergodicCapacity(semi)));
    if (cfg.mcN > 0) {
      const auto mf = mcsim::estimate(full, mcsim::MeanI{}, cfg.mcN, cfg.seed);
      const auto ms = mcsim::estimate(semi, mcsim::MeanI{}, cfg.mcN, cfg.seed + 1);
      out << ',' << formatDouble(toUnits(cfg, mf.mean.real())) << ',' << formatDouble(toUnits(cfg, mf.stderrOfMean))
          << ',' << formatDouble(toUnits(cfg, ms.mean.real())) << ',' << formatDouble(toUnits(cfg, ms.stderrOfMean));
    }
    out << '\n';
  }
  return 0;
}

int runTask(const std::string& task, const RunConfig& cfg) {
  std::ofstream file;
  std::ostream* out = &std::cout;
  if (!cfg.outPath.empty()) {
    file.open(cfg.outPath);
    if (!file) throw ContractError("cannot open output file: " + cfg.outPath);
    out = &file;
  }
  if (task == "mgf") return runMgf(cfg, *out);
  if (task == "ergodic") return runErgodic(cfg, *out);
  if (task == "outage") return runOutageCurve(cfg, *out);
  if (task == "density") return runDensity(cfg, *out);
  if (task == "simulate") return runSimulate(cfg, *out);
  if (task == "ustm") return runUstm(cfg, *out);
  if (task == "sweep") return runSweep(cfg, *out);
  if (task == "validate") {
    validate::Options vo;
    vo.tolScale = cfg.tol;
    vo.seed = cfg.seed;
    if (cfg.mcN > 0) vo.mcSamples = cfg.mcN;
    return validate::runValidate(vo, *out);
  }
  throw ContractError("unknown task: " + task);
}

}  // namespace mimostat::cli
