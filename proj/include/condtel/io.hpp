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

// JSON and CSV serialization of states, grids, profiles and BK results.
// Floating-point values in CSV use 17 significant digits; JSON numbers use
// the shortest representation that round-trips, so both are exact and
// byte-stable.

#pragma once

#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "condtel/analysis.hpp"
#include "condtel/bk.hpp"
#include "condtel/fock.hpp"
#include "condtel/squeeze.hpp"
#include "condtel/teleport.hpp"
#include "json.hpp"

namespace condtel::io {

using Json = nlohmann::ordered_json;

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline Json to_json(const FockVector& state) {
  Json arr = Json::array();
  for (const auto& a : state.amplitudes()) arr.push_back({a.real(), a.imag()});
  return arr;
}

inline Json to_json(const SqueezeParams& p) {
  return {{"magnitude", p.magnitude}, {"phase", p.phase}};
}

/// Accepts [[re, im], ...] or {"amplitudes": [[re, im], ...]}; a bare number
/// is read as a real amplitude.
inline std::vector<Complex> amplitudes_from_json(const Json& j) {
  const Json& arr = j.is_object() ? j.at("amplitudes") : j;
  if (!arr.is_array()) {
    throw std::invalid_argument("state JSON: expected an array of amplitudes");
  }
  std::vector<Complex> out;
  for (const auto& item : arr) {
    if (item.is_number()) {
      out.emplace_back(item.get<double>(), 0.0);
    } else if (item.is_array() && item.size() == 2) {
      out.emplace_back(item[0].get<double>(), item[1].get<double>());
    } else {
      throw std::invalid_argument("state JSON: amplitude must be [re, im]");
    }
  }
  return out;
}

/// Parses "re,im;re,im;..." where the position is the photon number. An
/// entry without a comma is a real amplitude.
inline std::vector<Complex> parse_amplitudes(std::string_view text) {
  std::vector<Complex> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = std::min(text.find(';', pos), text.size());
    std::string item(text.substr(pos, end - pos));
    const auto first = item.find_first_not_of(" \t");
    if (first == std::string::npos) {
      throw std::invalid_argument("--state: empty amplitude");
    }
    const std::size_t comma = item.find(',');
    auto number = [](const std::string& s) {
      std::size_t used = 0;
      const double v = std::stod(s, &used);
      if (s.find_first_not_of(" \t", used) != std::string::npos) {
        throw std::invalid_argument("--state: bad number '" + s + "'");
      }
      return v;
    };
    try {
      if (comma == std::string::npos) {
        out.emplace_back(number(item), 0.0);
      } else {
        out.emplace_back(number(item.substr(0, comma)),
                         number(item.substr(comma + 1)));
      }
    } catch (const std::logic_error&) {
      throw std::invalid_argument("--state: cannot parse '" + item + "'");
    }
    pos = end + 1;
  }
  return out;
}

inline Json grid_to_json(const OutcomeGrid& grid) {
  Json entries = Json::array();
  for (int n = 0; n <= grid.n_max; ++n) {
    for (int np = 0; np <= grid.n_max; ++np) {
      const auto& e = grid.at(n, np);
      entries.push_back({{"n", n},
                         {"nprime", np},
                         {"fidelity", e.fidelity},
                         {"probability", e.probability}});
    }
  }
  return {{"alpha", to_json(grid.alpha)},
          {"beta", to_json(grid.beta)},
          {"cutoff", grid.cutoff()},
          {"n_max", grid.n_max},
          {"input", to_json(grid.input)},
          {"entries", std::move(entries)}};
}

inline void write_grid_csv(std::ostream& os, const OutcomeGrid& grid) {
  os << "n,nprime,fidelity,probability\n";
  for (int n = 0; n <= grid.n_max; ++n) {
    for (int np = 0; np <= grid.n_max; ++np) {
      const auto& e = grid.at(n, np);
      os << n << ',' << np << ',' << format_double(e.fidelity) << ','
         << format_double(e.probability) << '\n';
    }
  }
}

inline Json diagonal_to_json(const std::vector<DiagonalPoint>& diag) {
  Json rows = Json::array();
  for (const auto& d : diag) {
    rows.push_back(
        {{"n", d.n}, {"fidelity", d.fidelity}, {"probability", d.probability}});
  }
  return rows;
}

inline void write_diagonal_csv(std::ostream& os,
                               const std::vector<DiagonalPoint>& diag) {
  os << "n,fidelity,probability\n";
  for (const auto& d : diag) {
    os << d.n << ',' << format_double(d.fidelity) << ','
       << format_double(d.probability) << '\n';
  }
}

inline Json profile_to_json(const std::vector<Complex>& profile) {
  Json rows = Json::array();
  for (std::size_t m = 0; m < profile.size(); ++m) {
    rows.push_back({{"m", m},
                    {"real", profile[m].real()},
                    {"imag", profile[m].imag()}});
  }
  return rows;
}

inline void write_profile_csv(std::ostream& os,
                              const std::vector<Complex>& profile) {
  os << "m,real,imag\n";
  for (std::size_t m = 0; m < profile.size(); ++m) {
    os << m << ',' << format_double(profile[m].real()) << ','
       << format_double(profile[m].imag()) << '\n';
  }
}

inline Json teleport_to_json(const TeleportResult& r,
                             const MeasurementOutcome& o) {
  return {{"n", o.n},
          {"nprime", o.n_prime},
          {"probability", r.probability},
          {"fidelity", r.fidelity},
          {"psi_out", to_json(r.psi_out)},
          {"psi_tel", to_json(r.psi_tel)}};
}

inline Json bk_summary_to_json(const BkSummary& s) {
  return {{"r", s.r},
          {"F_u", s.threshold},
          {"P_u", s.success_probability},
          {"total_probability", s.total_probability},
          {"grid", {{"L", s.half_width}, {"h", s.step}}}};
}

inline void write_bk_csv(std::ostream& os,
                         const std::vector<BkOutcomePoint>& map) {
  os << "x,p,fidelity,density\n";
  for (const auto& pt : map) {
    os << format_double(pt.x) << ',' << format_double(pt.p) << ','
       << format_double(pt.fidelity) << ',' << format_double(pt.density)
       << '\n';
  }
}

inline Json to_json(const ConvergenceReport& r) {
  return {{"quantity", r.quantity},
          {"cutoff", r.cutoff},
          {"coarse", r.coarse},
          {"fine", r.fine},
          {"difference", r.difference},
          {"tolerance", r.tolerance},
          {"converged", r.converged}};
}

}  // namespace condtel::io
