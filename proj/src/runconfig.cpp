#include "mimostat/runconfig.hpp"

#include <fstream>
#include <sstream>

#include "mimostat/matio.hpp"

namespace mimostat::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

bool parseBool(const std::string& v) {
  if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
  if (v == "0" || v == "false" || v == "no" || v == "off") return false;
  throw ContractError("config: bad boolean value '" + v + "'");
}

}  // namespace

RunConfig RunConfig::fromFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ContractError("config file not found: " + path);
  RunConfig cfg;
  std::string line;
  while (std::getline(in, line)) {
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#' || t[0] == ';') continue;
    if (t.front() == '[' && t.back() == ']') continue;  // section headers group keys visually
    const auto eq = t.find('=');
    if (eq == std::string::npos) throw ContractError("config: expected key=value, got '" + t + "'");
    cfg.applyKey(trim(t.substr(0, eq)), trim(t.substr(eq + 1)));
  }
  return cfg;
}

void RunConfig::applyKey(const std::string& key, const std::string& value) {
  try {
    if (key == "variant") {
      if (value != "iid" && value != "semicorr" && value != "nzmean" && value != "fullcorr")
        throw ContractError("config: unknown variant '" + value + "'");
      variant = value;
    } else if (key == "nt") {
      nt = std::stoi(value);
    } else if (key == "nr") {
      nr = std::stoi(value);
    } else if (key == "d_lambda") {
      dLambda = std::stod(value);
    } else if (key == "delta") {
      delta = std::stod(value);
    } else if (key == "corr_rx") {
      corrRx = parseBool(value);
    } else if (key == "t_file") {
      tFile = value;
    } else if (key == "r_file") {
      rFile = value;
    } else if (key == "g0_file") {
      g0File = value;
    } else if (key == "y_file") {
      yFile = value;
    } else if (key == "snr") {
      snr = std::stod(value);
    } else if (key == "z_re") {
      zRe = std::stod(value);
    } else if (key == "z_im") {
      zIm = std::stod(value);
    } else if (key == "i_out") {
      iOut = std::stod(value);
    } else if (key == "i_out_min") {
      iOutMin = std::stod(value);
    } else if (key == "i_out_max") {
      iOutMax = std::stod(value);
    } else if (key == "i_out_points") {
      iOutPoints = std::stoi(value);
    } else if (key == "sweep_var") {
      sweepVar = value;
    } else if (key == "sweep_min") {
      sweepMin = std::stod(value);
    } else if (key == "sweep_max") {
      sweepMax = std::stod(value);
    } else if (key == "sweep_points") {
      sweepPoints = std::stoi(value);
    } else if (key == "lambda_min") {
      lambdaMin = std::stod(value);
    } else if (key == "lambda_max") {
      lambdaMax = std::stod(value);
    } else if (key == "lambda_points") {
      lambdaPoints = std::stoi(value);
    } else if (key == "tcoh") {
      tcoh = std::stoi(value);
    } else if (key == "tol") {
      tol = std::stod(value);
    } else if (key == "mc_n") {
      mcN = std::stoll(value);
    } else if (key == "seed") {
      seed = std::stoull(value);
    } else if (key == "bits") {
      bits = parseBool(value);
    } else if (key == "out") {
      outPath = value;
    } else {
      throw ContractError("config: unknown key '" + key + "'");
    }
  } catch (const std::invalid_argument&) {
    throw ContractError("config: bad value for key '" + key + "': '" + value + "'");
  } catch (const std::out_of_range&) {
    throw ContractError("config: value out of range for key '" + key + "'");
  }
}

std::string RunConfig::canonicalText() const {
  std::ostringstream os;
  using matio::formatDouble;
  os << "variant=" << variant << "\nnt=" << nt << "\nnr=" << nr << "\nd_lambda=" << formatDouble(dLambda)
     << "\ndelta=" << formatDouble(delta) << "\ncorr_rx=" << (corrRx ? 1 : 0) << "\nt_file=" << tFile
     << "\nr_file=" << rFile << "\ng0_file=" << g0File << "\ny_file=" << yFile << "\nsnr=" << formatDouble(snr)
     << "\nz_re=" << formatDouble(zRe) << "\nz_im=" << formatDouble(zIm) << "\ni_out=" << formatDouble(iOut)
     << "\ni_out_min=" << formatDouble(iOutMin) << "\ni_out_max=" << formatDouble(iOutMax)
     << "\ni_out_points=" << iOutPoints << "\nsweep_var=" << sweepVar << "\nsweep_min=" << formatDouble(sweepMin)
     << "\nsweep_max=" << formatDouble(sweepMax) << "\nsweep_points=" << sweepPoints
     << "\nlambda_min=" << formatDouble(lambdaMin) << "\nlambda_max=" << formatDouble(lambdaMax)
     << "\nlambda_points=" << lambdaPoints << "\ntcoh=" << tcoh << "\ntol=" << formatDouble(tol) << "\nmc_n=" << mcN
     << "\nbits=" << (bits ? 1 : 0) << "\n";
  return os.str();
}

std::uint64_t RunConfig::hash() const {
  // FNV-1a over the canonical text
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : canonicalText()) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

channels::ComplexMatrix RunConfig::buildT() const {
  channels::ComplexMatrix t;
  if (!tFile.empty()) {
    t = matio::readMatrixFile(tFile);
    if (t.rows() != nt) throw ContractError("config: t_file dimension does not match nt");
  } else {
    t = channels::correlationMatrix({nt, dLambda, delta});
  }
  if (snr != 1.0) t *= snr;
  return t;
}

channels::ChannelSpec RunConfig::buildSpec() const {
  using channels::ChannelSpec;
  if (nt < 1 || nr < 1) throw ContractError("config: antenna counts must be >= 1");
  if (variant == "iid") {
    if (snr != 1.0) return ChannelSpec::makeSemiCorrelated(snr * channels::ComplexMatrix::Identity(nt, nt), nr);
    return ChannelSpec::makeIid(nt, nr);
  }
  if (variant == "semicorr") return ChannelSpec::makeSemiCorrelated(buildT(), nr);
  if (variant == "nzmean") {
    channels::ComplexMatrix g0;
    if (!g0File.empty()) {
      g0 = matio::readMatrixFile(g0File);
      if (g0.rows() != nr || g0.cols() != nt) throw ContractError("config: g0_file must be nr x nt");
    } else {
      g0 = channels::ComplexMatrix::Ones(nr, nt);  // rank-one mean by default
    }
    if (snr != 1.0) g0 *= std::sqrt(snr);
    return ChannelSpec::makeNonzeroMean(g0);
  }
  if (variant == "fullcorr") {
    channels::ComplexMatrix r;
    if (!rFile.empty()) {
      r = matio::readMatrixFile(rFile);
      if (r.rows() != nr) throw ContractError("config: r_file dimension does not match nr");
    } else if (corrRx) {
      r = channels::correlationMatrix({nr, dLambda, delta});
    } else {
      r = channels::ComplexMatrix::Identity(nr, nr);
    }
    return channels::ChannelSpec::makeFullyCorrelated(buildT(), r);
  }
  throw ContractError("config: unknown variant '" + variant + "'");
}

}  // namespace mimostat::cli
