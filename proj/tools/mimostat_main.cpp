#include <CLI11.hpp>
#include <iostream>

#include "mimostat/clitasks.hpp"
#include "mimostat/validate.hpp"

namespace {

struct FlagState {
  std::string configPath;
  std::vector<std::pair<std::string, std::string>> overrides;
};

void addSharedOptions(CLI::App* cmd, FlagState& fs) {
  cmd->add_option("--config", fs.configPath, "key=value configuration file");
  auto kv = [&fs](const std::string& key) {
    return [&fs, key](const std::string& v) { fs.overrides.push_back({key, v}); };
  };
  cmd->add_option_function<std::string>("--seed", kv("seed"), "base RNG seed (u64)");
  cmd->add_option_function<std::string>("--out", kv("out"), "output path (default stdout)");
  cmd->add_option_function<std::string>("--tol", kv("tol"), "tolerance scale");
  cmd->add_option_function<std::string>("--mc-n", kv("mc_n"), "Monte Carlo sample count");
  cmd->add_flag_callback("--bits", [&fs] { fs.overrides.push_back({"bits", "1"}); },
                         "report capacities in bits instead of nats");
  cmd->add_option_function<std::string>("--variant", kv("variant"), "iid|semicorr|nzmean|fullcorr");
  cmd->add_option_function<std::string>("--nt", kv("nt"), "transmit antennas");
  cmd->add_option_function<std::string>("--nr", kv("nr"), "receive antennas");
  cmd->add_option_function<std::string>("--d-lambda", kv("d_lambda"), "antenna spacing in wavelengths");
  cmd->add_option_function<std::string>("--delta", kv("delta"), "angle spread in degrees");
  cmd->add_option_function<std::string>("--snr", kv("snr"), "SNR scale applied to T (or G0)");
  cmd->add_option_function<std::string>("--t-file", kv("t_file"), "transmit correlation matrix file");
  cmd->add_option_function<std::string>("--r-file", kv("r_file"), "receive correlation matrix file");
  cmd->add_option_function<std::string>("--g0-file", kv("g0_file"), "mean matrix file");
  cmd->add_option_function<std::string>("--no-corr-rx", kv("corr_rx"),
                                        "set to 0 to leave the receive side uncorrelated");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact statistics of Gaussian MIMO mutual information"};
  app.require_subcommand(1);

  struct Sub {
    const char* name;
    const char* help;
  };
  const Sub subs[] = {
      {"mgf", "evaluate g(z) at one complex point"},
      {"ergodic", "analytic ergodic capacity"},
      {"outage", "outage curve by characteristic-function inversion"},
      {"density", "joint eigenvalue density on a grid (CSV)"},
      {"simulate", "Monte Carlo estimate of E[I]"},
      {"ustm", "received-signal density p(Y) for unitary space-time inputs"},
      {"validate", "run the numeric validation suite"},
      {"sweep", "capacity sweep over d_lambda, delta, or snr (CSV)"},
  };

  std::map<std::string, FlagState> flagStates;
  for (const auto& s : subs) {
    CLI::App* cmd = app.add_subcommand(s.name, s.help);
    FlagState& fs = flagStates[s.name];
    addSharedOptions(cmd, fs);
    if (std::string(s.name) == "mgf") {
      cmd->add_option_function<std::string>("--z-re", [&fs](const std::string& v) { fs.overrides.push_back({"z_re", v}); }, "Re z");
      cmd->add_option_function<std::string>("--z-im", [&fs](const std::string& v) { fs.overrides.push_back({"z_im", v}); }, "Im z");
    }
    if (std::string(s.name) == "outage") {
      cmd->add_option_function<std::string>("--i-out", [&fs](const std::string& v) { fs.overrides.push_back({"i_out", v}); }, "single threshold");
      cmd->add_option_function<std::string>("--i-out-min", [&fs](const std::string& v) { fs.overrides.push_back({"i_out_min", v}); }, "grid start");
      cmd->add_option_function<std::string>("--i-out-max", [&fs](const std::string& v) { fs.overrides.push_back({"i_out_max", v}); }, "grid end");
      cmd->add_option_function<std::string>("--i-out-points", [&fs](const std::string& v) { fs.overrides.push_back({"i_out_points", v}); }, "grid size");
    }
    if (std::string(s.name) == "density") {
      cmd->add_option_function<std::string>("--lambda-min", [&fs](const std::string& v) { fs.overrides.push_back({"lambda_min", v}); }, "grid start");
      cmd->add_option_function<std::string>("--lambda-max", [&fs](const std::string& v) { fs.overrides.push_back({"lambda_max", v}); }, "grid end");
      cmd->add_option_function<std::string>("--lambda-points", [&fs](const std::string& v) { fs.overrides.push_back({"lambda_points", v}); }, "grid size");
    }
    if (std::string(s.name) == "sweep") {
      cmd->add_option_function<std::string>("--sweep-var", [&fs](const std::string& v) { fs.overrides.push_back({"sweep_var", v}); }, "d_lambda|delta|snr");
      cmd->add_option_function<std::string>("--sweep-min", [&fs](const std::string& v) { fs.overrides.push_back({"sweep_min", v}); }, "range start");
      cmd->add_option_function<std::string>("--sweep-max", [&fs](const std::string& v) { fs.overrides.push_back({"sweep_max", v}); }, "range end");
      cmd->add_option_function<std::string>("--sweep-points", [&fs](const std::string& v) { fs.overrides.push_back({"sweep_points", v}); }, "number of points");
    }
    if (std::string(s.name) == "ustm") {
      cmd->add_option_function<std::string>("--tcoh", [&fs](const std::string& v) { fs.overrides.push_back({"tcoh", v}); }, "coherence length");
      cmd->add_option_function<std::string>("--y-file", [&fs](const std::string& v) { fs.overrides.push_back({"y_file", v}); }, "received matrix file");
    }
    if (std::string(s.name) == "validate") {
      cmd->add_flag_callback("--mutate-density-sign",
                             [&fs] { fs.overrides.push_back({"__mutate", "1"}); },
                             "deliberate-fault harness: flip a density sign so nonnegativity must fail");
    }
  }

  CLI11_PARSE(app, argc, argv);

  const std::string task = app.get_subcommands().front()->get_name();
  const FlagState& fs = flagStates[task];
  try {
    mimostat::cli::RunConfig cfg;
    if (!fs.configPath.empty()) cfg = mimostat::cli::RunConfig::fromFile(fs.configPath);
    bool mutate = false;
    for (const auto& [k, v] : fs.overrides) {
      if (k == "__mutate") {
        mutate = true;
        continue;
      }
      cfg.applyKey(k, v);
    }
    if (task == "validate") {
      mimostat::validate::Options vo;
      vo.tolScale = cfg.tol;
      vo.seed = cfg.seed;
      if (cfg.mcN > 0) vo.mcSamples = cfg.mcN;
      vo.mutateDensitySign = mutate;
      return mimostat::validate::runValidate(vo, std::cout);
    }
    return mimostat::cli::runTask(task, cfg);
  } catch (const mimostat::ContractError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const mimostat::NumericError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
