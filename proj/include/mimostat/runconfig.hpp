#pragma once

#include <cstdint>
#include <string>

#include "mimostat/channels.hpp"

namespace mimostat::cli {

/// Line-oriented key=value configuration with optional [section] headers.
/// CLI flags override file values; unknown keys are rejected.
struct RunConfig {
  // channel
  std::string variant = "iid";  // iid | semicorr | nzmean | fullcorr
  int nt = 2;
  int nr = 2;
  double dLambda = 0.5;
  double delta = 10.0;
  bool corrRx = true;  // fullcorr: receive side also from the array model
  std::string tFile, rFile, g0File, yFile;
  double snr = 1.0;

  // task parameters
  double zRe = 0.0, zIm = 0.0;
  double iOut = 0.0, iOutMin = 0.0, iOutMax = 0.0;
  int iOutPoints = 0;
  std::string sweepVar = "d_lambda";
  double sweepMin = 0.1, sweepMax = 3.0;
  int sweepPoints = 10;
  double lambdaMin = 0.05, lambdaMax = 10.0;
  int lambdaPoints = 40;
  int tcoh = 2;

  // numeric settings
  double tol = 1.0;  // scales validation tolerances
  long long mcN = 0;
  std::uint64_t seed = 12345;
  bool bits = false;
  std::string outPath;

  static RunConfig fromFile(const std::string& path);
  void applyKey(const std::string& key, const std::string& value);

  /// Deterministic canonical rendering (input to the config hash).
  std::string canonicalText() const;
  std::uint64_t hash() const;

  /// Build the channel ensemble this configuration describes. SNR scaling is
  /// applied to the transmit correlation (or the mean matrix).
  channels::ChannelSpec buildSpec() const;

  /// T for the correlated variants (from file or the array model), nt x nt.
  channels::ComplexMatrix buildT() const;
};

}  // namespace mimostat::cli
