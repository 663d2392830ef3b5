// Copyright 2026 The condtel Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// condtel: command-line front end.
//
//   condtel coeffs    --n 1 --d 0 --alpha 1.5 --beta 1.5 --mmax 20
//   condtel teleport  --state "0,0;0.7071,0;0,0;0,0.7071" --alpha 1.5
//                     --beta 1.5 --n 3 --nprime 1
//   condtel sweep | diagonal | pu  (state, alpha, beta, --nmax, --fu)
//   condtel bk        --state ... --r 1.5 --fu 0.9
//
// Exit codes: 0 ok, 2 usage, 3 precision loss, 4 impossible outcome,
// 5 not converged, 1 anything else.

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "condtel.hpp"
#include "condtel/io.hpp"

namespace {

using condtel::Complex;
using condtel::FockVector;
using condtel::SqueezeParams;
using condtel::io::Json;

constexpr int kExitUsage = 2;
constexpr int kExitPrecision = 3;
constexpr int kExitImpossible = 4;
constexpr int kExitNotConverged = 5;
constexpr double kRenormWarning = 1e-6;

struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct RunConfig {
  std::string command;
  std::optional<std::string> state_text;
  std::optional<std::string> state_file;
  std::optional<double> alpha;
  double alpha_phase = 0.0;
  std::optional<double> beta;
  double beta_phase = 0.0;
  std::optional<int> cutoff;
  int n_max = condtel::kDefaultSweepNMax;
  double fu = 0.9;
  bool diagonal = false;
  std::optional<int> n;
  std::optional<int> n_prime;
  std::optional<int> d;
  std::optional<int> m_max;
  std::optional<double> r;
  double half_width = 8.0;
  double step = 0.05;
  double gain = 1.0;
  std::string output;
  std::string format = "json";
  bool check_convergence = false;
  unsigned workers = 0;
};

template <class T>
const T& require(const std::optional<T>& v, const char* flag) {
  if (!v) throw UsageError(std::string("missing required flag ") + flag);
  return *v;
}

int cutoff_or(const RunConfig& c, int fallback) {
  const int n = c.cutoff.value_or(fallback);
  if (n < 1) throw UsageError("--cutoff must be >= 1");
  return n;
}

SqueezeParams alpha_of(const RunConfig& c) {
  return {require(c.alpha, "--alpha"), c.alpha_phase};
}

SqueezeParams beta_of(const RunConfig& c) {
  return {require(c.beta, "--beta"), c.beta_phase};
}

FockVector load_state(const RunConfig& c, int cutoff) {
  std::vector<Complex> amps;
  if (c.state_text && c.state_file) {
    throw UsageError("--state and --state-file are exclusive");
  }
  if (c.state_text) {
    amps = condtel::io::parse_amplitudes(*c.state_text);
  } else if (c.state_file) {
    std::ifstream in(*c.state_file);
    if (!in) throw UsageError("cannot open state file " + *c.state_file);
    Json j;
    try {
      j = Json::parse(in);
    } catch (const Json::exception& e) {
      throw UsageError(std::string("state file: ") + e.what());
    }
    amps = condtel::io::amplitudes_from_json(j);
  } else {
    throw UsageError("missing required flag --state or --state-file");
  }
  if (static_cast<int>(amps.size()) > cutoff + 1) {
    throw UsageError("input state has more amplitudes than --cutoff allows");
  }
  auto [unit, norm2] = condtel::normalize(
      condtel::make_state(std::span<const Complex>(amps), cutoff));
  if (std::abs(norm2 - 1.0) > kRenormWarning) {
    std::cerr << "warning: input state renormalized (squared norm "
              << condtel::io::format_double(norm2) << ")\n";
  }
  return unit;
}

Json config_json(const RunConfig& c, int cutoff) {
  Json j;
  j["command"] = c.command;
  if (c.state_text) j["state"] = *c.state_text;
  if (c.state_file) j["state_file"] = *c.state_file;
  if (c.alpha) j["alpha"] = {{"magnitude", *c.alpha}, {"phase", c.alpha_phase}};
  if (c.beta) j["beta"] = {{"magnitude", *c.beta}, {"phase", c.beta_phase}};
  j["cutoff"] = cutoff;
  if (c.command == "sweep" || c.command == "diagonal" || c.command == "pu") {
    j["n_max"] = c.n_max;
  }
  if (c.command == "pu" || c.command == "bk" || c.command == "diagonal") {
    j["F_u"] = c.fu;
  }
  if (c.command == "pu") j["diagonal"] = c.diagonal;
  if (c.n) j["n"] = *c.n;
  if (c.n_prime) j["nprime"] = *c.n_prime;
  if (c.d) j["d"] = *c.d;
  if (c.m_max) j["mmax"] = *c.m_max;
  if (c.command == "bk") {
    j["r"] = c.r.value_or(0.0);
    j["L"] = c.half_width;
    j["h"] = c.step;
    j["gain"] = c.gain;
  }
  j["format"] = c.format;
  return j;
}

struct Output {
  Json body;
  std::string csv;  // used when format == csv
  std::optional<condtel::ConvergenceReport> convergence;
};

Json reproducibility(const RunConfig& c, int cutoff, const Output& out) {
  Json j;
  j["version"] = condtel::kVersion;
  j["cutoff"] = cutoff;
  if (out.convergence) {
    j["convergence"] = condtel::io::to_json(*out.convergence);
  } else {
    j["convergence"] = c.check_convergence ? "unavailable" : "not_requested";
  }
  return j;
}

void emit(const RunConfig& c, int cutoff, const Output& out) {
  std::ostringstream text;
  if (c.format == "csv") {
    // flat key=value comment lines carry the configuration
    const Json cfg = config_json(c, cutoff);
    for (const auto& [k, v] : cfg.items()) {
      text << "# config: " << k << '=' << (v.is_string() ? v.get<std::string>() : v.dump())
           << '\n';
    }
    const Json rep = reproducibility(c, cutoff, out);
    text << "# reproducibility: " << rep.dump() << '\n';
    text << out.csv;
  } else {
    Json doc = out.body;
    doc["config"] = config_json(c, cutoff);
    doc["reproducibility"] = reproducibility(c, cutoff, out);
    text << doc.dump(2) << '\n';
  }
  if (c.output.empty()) {
    std::cout << text.str();
  } else {
    std::ofstream f(c.output, std::ios::binary);
    if (!f) throw UsageError("cannot write " + c.output);
    f << text.str();
  }
}

std::optional<condtel::ConvergenceReport> maybe_check(
    const RunConfig& c, const FockVector& psi, const SqueezeParams& a,
    const SqueezeParams& b, const condtel::Quantity& q, int cutoff) {
  if (!c.check_convergence) return std::nullopt;
  condtel::SweepOptions opts;
  opts.workers = c.workers;
  return condtel::convergence_check(psi, a, b, q, cutoff,
                                    condtel::kConvergenceTolerance, opts);
}

Output cmd_coeffs(const RunConfig& c, int cutoff) {
  const int n = require(c.n, "--n");
  const int d = require(c.d, "--d");
  const int m_max = require(c.m_max, "--mmax");
  const auto a = alpha_of(c);
  const auto b = beta_of(c);
  condtel::CoeffCache cache;
  const auto profile = condtel::coeff_profile(n, d, a, b, m_max, &cache);
  Output out;
  out.body["profile"] = condtel::io::profile_to_json(profile);
  std::ostringstream csv;
  condtel::io::write_profile_csv(csv, profile);
  out.csv = csv.str();
  out.convergence = maybe_check(c, FockVector::basis(0, cutoff), a, b,
                                condtel::ProfileQuantity{n, d, m_max}, cutoff);
  return out;
}

Output cmd_teleport(const RunConfig& c, int cutoff) {
  const condtel::MeasurementOutcome o(require(c.n, "--n"),
                                      require(c.n_prime, "--nprime"));
  const auto psi = load_state(c, cutoff);
  const auto a = alpha_of(c);
  const auto b = beta_of(c);
  const auto r = condtel::teleport_event(psi, a, b, o);
  Output out;
  out.body["result"] = condtel::io::teleport_to_json(r, o);
  std::ostringstream csv;
  csv << "# probability=" << condtel::io::format_double(r.probability)
      << "\n# fidelity=" << condtel::io::format_double(r.fidelity) << '\n';
  csv << "m,out_real,out_imag,tel_real,tel_imag\n";
  const int top = std::max(r.psi_out.cutoff(), r.psi_tel.cutoff());
  for (int m = 0; m <= top; ++m) {
    const Complex po = r.psi_out.at(m);
    const Complex pt = r.psi_tel.at(m);
    csv << m << ',' << condtel::io::format_double(po.real()) << ','
        << condtel::io::format_double(po.imag()) << ','
        << condtel::io::format_double(pt.real()) << ','
        << condtel::io::format_double(pt.imag()) << '\n';
  }
  out.csv = csv.str();
  out.convergence = maybe_check(c, psi, a, b,
                                condtel::CellQuantity{o, false}, cutoff);
  return out;
}

void check_window(const RunConfig& c, int cutoff) {
  if (c.n_max < 0) throw UsageError("--nmax must be >= 0");
  if (c.n_max > cutoff) throw UsageError("--nmax must not exceed --cutoff");
}

Output cmd_sweep(const RunConfig& c, int cutoff) {
  check_window(c, cutoff);
  const auto psi = load_state(c, cutoff);
  const auto a = alpha_of(c);
  const auto b = beta_of(c);
  condtel::SweepOptions opts;
  opts.workers = c.workers;
  const auto grid = condtel::sweep_grid(psi, a, b, c.n_max, opts);
  Output out;
  out.body["grid"] = condtel::io::grid_to_json(grid);
  out.body["total_probability"] = grid.total_probability();
  std::ostringstream csv;
  condtel::io::write_grid_csv(csv, grid);
  out.csv = csv.str();
  out.convergence = maybe_check(c, psi, a, b,
                                condtel::SuccessQuantity{0.0, false}, cutoff);
  return out;
}

Output cmd_diagonal(const RunConfig& c, int cutoff) {
  check_window(c, cutoff);
  const auto psi = load_state(c, cutoff);
  const auto a = alpha_of(c);
  const auto b = beta_of(c);
  condtel::SweepOptions opts;
  opts.workers = c.workers;
  const auto diag = condtel::diagonal_sweep(psi, a, b, c.n_max, opts);
  Output out;
  out.body["diagonal"] = condtel::io::diagonal_to_json(diag);
  out.body["F_u"] = c.fu;
  out.body["P_u"] = condtel::diagonal_success(diag, c.fu);
  std::ostringstream csv;
  condtel::io::write_diagonal_csv(csv, diag);
  out.csv = csv.str();
  out.convergence = maybe_check(c, psi, a, b,
                                condtel::SuccessQuantity{c.fu, true}, cutoff);
  return out;
}

Output cmd_pu(const RunConfig& c, int cutoff) {
  check_window(c, cutoff);
  if (!(c.fu >= 0.0)) throw UsageError("--fu must be >= 0");
  const auto psi = load_state(c, cutoff);
  const auto a = alpha_of(c);
  const auto b = beta_of(c);
  condtel::SweepOptions opts;
  opts.workers = c.workers;
  double pu = 0.0;
  if (c.diagonal) {
    pu = condtel::diagonal_success(
        condtel::diagonal_sweep(psi, a, b, c.n_max, opts), c.fu);
  } else {
    pu = condtel::conditional_success(
        condtel::sweep_grid(psi, a, b, c.n_max, opts), c.fu,
        condtel::accept_all());
  }
  const char* filter = c.diagonal ? "diagonal" : "all";
  Output out;
  out.body["F_u"] = c.fu;
  out.body["P_u"] = pu;
  out.body["filter"] = filter;
  out.csv = "F_u,P_u,filter\n" + condtel::io::format_double(c.fu) + ',' +
            condtel::io::format_double(pu) + ',' + filter + '\n';
  out.convergence = maybe_check(
      c, psi, a, b, condtel::SuccessQuantity{c.fu, c.diagonal}, cutoff);
  return out;
}

Output cmd_bk(const RunConfig& c, int cutoff) {
  condtel::BKConfig cfg;
  cfg.r = require(c.r, "--r");
  cfg.half_width = c.half_width;
  cfg.step = c.step;
  cfg.gain = c.gain;
  cfg.cutoff = cutoff;
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  const auto psi = load_state(c, cutoff);
  const auto map = condtel::bk_outcome_map(psi, cfg, c.workers);
  const auto summary = condtel::bk_summarize(map, cfg, c.fu);
  Output out;
  out.body["summary"] = condtel::io::bk_summary_to_json(summary);
  std::ostringstream csv;
  condtel::io::write_bk_csv(csv, map);
  out.csv = csv.str();
  if (c.check_convergence) {
    condtel::BKConfig fine = cfg;
    fine.cutoff = 2 * cutoff;
    condtel::ConvergenceReport rep;
    rep.quantity = "bk_P_u(F_u=" + std::to_string(c.fu) + ")";
    rep.cutoff = cutoff;
    rep.coarse = summary.success_probability;
    rep.fine = condtel::bk_pu(psi.with_cutoff(fine.cutoff), fine, c.fu,
                              c.workers);
    rep.difference = std::abs(rep.fine - rep.coarse);
    rep.converged = rep.difference < rep.tolerance;
    out.convergence = rep;
  }
  return out;
}

int run(RunConfig& c) {
  const int default_cutoff = c.command == "bk" ? 100 : condtel::kDefaultCutoff;
  const int cutoff = cutoff_or(c, default_cutoff);
  if (c.format != "json" && c.format != "csv") {
    throw UsageError("--format must be json or csv");
  }
  Output out;
  try {
    if (c.command == "coeffs") out = cmd_coeffs(c, cutoff);
    else if (c.command == "teleport") out = cmd_teleport(c, cutoff);
    else if (c.command == "sweep") out = cmd_sweep(c, cutoff);
    else if (c.command == "diagonal") out = cmd_diagonal(c, cutoff);
    else if (c.command == "pu") out = cmd_pu(c, cutoff);
    else out = cmd_bk(c, cutoff);
  } catch (const condtel::ImpossibleOutcomeError& e) {
    Output body;
    body.body["error"] = "impossible_outcome";
    body.body["message"] = e.what();
    body.body["n"] = c.n.value_or(-1);
    body.body["nprime"] = c.n_prime.value_or(-1);
    body.body["probability"] = 0.0;
    RunConfig json_cfg = c;
    json_cfg.format = "json";
    emit(json_cfg, cutoff, body);
    return kExitImpossible;
  }
  emit(c, cutoff, out);
  if (out.convergence && !out.convergence->converged) {
    std::cerr << "error: not converged for " << out.convergence->quantity
              << " (difference " << out.convergence->difference
              << " at cutoff " << cutoff << " vs " << 2 * cutoff
              << "); rerun with a larger --cutoff\n";
    return kExitNotConverged;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Conditional teleportation with two squeezers and photon "
               "counting"};
  app.set_help_flag("--help", "print this help");  // -h is the BK grid step
  app.require_subcommand(1, 1);
  app.fallthrough();
  RunConfig c;

  app.add_option("--state", c.state_text,
                 "input amplitudes \"re,im;re,im;...\" indexed by photon number");
  app.add_option("--state-file", c.state_file,
                 "JSON file with [[re,im],...] or {\"amplitudes\": ...}");
  app.add_option("--alpha", c.alpha, "first squeezer magnitude");
  app.add_option("--alpha-phase", c.alpha_phase, "first squeezer phase");
  app.add_option("--beta", c.beta, "second squeezer magnitude");
  app.add_option("--beta-phase", c.beta_phase, "second squeezer phase");
  app.add_option("--cutoff", c.cutoff,
                 "Fock cutoff (default 60, 100 for bk)");
  app.add_option("--nmax", c.n_max, "largest photon count in sweeps")
      ->capture_default_str();
  app.add_option("--fu", c.fu, "fidelity threshold F_u")->capture_default_str();
  app.add_flag("--diagonal", c.diagonal, "pu: count only n = n' outcomes");
  app.add_option("--n", c.n, "photons counted in mode 0");
  app.add_option("--nprime", c.n_prime, "photons counted in mode 1");
  app.add_option("--d", c.d, "coeffs: photon-number difference");
  app.add_option("--mmax", c.m_max, "coeffs: largest m");
  app.add_option("--r", c.r, "bk: resource squeezing");
  app.add_option("--L", c.half_width, "bk: outcome grid half-width")
      ->capture_default_str();
  app.add_option("--h", c.step, "bk: outcome grid step")->capture_default_str();
  app.add_option("--gain", c.gain, "bk: displacement gain")
      ->capture_default_str();
  app.add_option("--output,-o", c.output, "output file (default stdout)");
  app.add_option("--format", c.format, "json or csv")->capture_default_str();
  app.add_flag("--check-convergence", c.check_convergence,
               "recompute at twice the cutoff and compare");
  app.add_option("--workers", c.workers, "threads (0 = all cores)");

  for (const char* name : {"coeffs", "teleport", "sweep", "diagonal", "pu", "bk"}) {
    app.add_subcommand(name)->fallthrough()->set_help_flag("--help");
  }
  app.get_subcommand("coeffs")->description("coefficient profile over m");
  app.get_subcommand("teleport")->description("one measurement outcome");
  app.get_subcommand("sweep")->description("fidelity/probability grid");
  app.get_subcommand("diagonal")->description("n = n' slice of the grid");
  app.get_subcommand("pu")->description("success probability above F_u");
  app.get_subcommand("bk")->description("quadrature-measurement baseline");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }
  c.command = app.get_subcommands().front()->get_name();

  try {
    return run(c);
  } catch (const condtel::ZeroStateError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  } catch (const condtel::PrecisionLossError& e) {
    std::cerr << "error: precision loss: " << e.what() << '\n';
    return kExitPrecision;
  } catch (const condtel::NotConvergedError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNotConverged;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const condtel::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
