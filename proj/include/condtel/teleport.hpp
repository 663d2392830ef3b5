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

// Conditional teleportation with two parametric amplifiers and photon
// counting.
//
// Mode 0 carries the input state, modes 1 and 2 start in vacuum. The first
// squeezer S_12(alpha) entangles modes 1 and 2, the second S_01(beta) mixes
// the input with mode 1. Alice counts n photons in mode 0 and n' in mode 1;
// Bob's mode 2 is left in a state whose Fock expansion is the input's shifted
// by d = n' - n, which Bob undoes with the ladder shift.

#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "condtel/errors.hpp"
#include "condtel/fock.hpp"
#include "condtel/numeric.hpp"
#include "condtel/squeeze.hpp"

namespace condtel {

/// Outcomes with probability at or below this are treated as impossible.
inline constexpr double kImpossibleOutcomeThreshold = 1e-14;

struct MeasurementOutcome {
  int n = 0;        ///< photons counted in mode 0
  int n_prime = 0;  ///< photons counted in mode 1

  MeasurementOutcome() = default;
  MeasurementOutcome(int n_, int n_prime_) : n(n_), n_prime(n_prime_) {
    if (n < 0 || n_prime < 0) {
      throw std::invalid_argument("MeasurementOutcome: negative photon count");
    }
  }

  int d() const { return n_prime - n; }

  friend bool operator==(const MeasurementOutcome&,
                         const MeasurementOutcome&) = default;
};

struct ConditionalState {
  FockVector state;  ///< normalized
  double probability = 0.0;
};

struct TeleportResult {
  FockVector psi_out;  ///< Bob's conditional state, normalized
  FockVector psi_tel;  ///< after the photon-number shift, normalized
  double probability = 0.0;
  double fidelity = 0.0;
};

/// Fidelity and probability of one outcome without materializing vectors.
struct EventSummary {
  double fidelity = 0.0;
  double probability = 0.0;
};

namespace detail {

struct SparseAmplitude {
  int m;
  Complex amplitude;
};

// Unnormalized amplitudes <m|psi_out> * sqrt(P) for the nonzero input
// components, in increasing m, and their squared norm.
struct ConditionalTerms {
  std::vector<SparseAmplitude> terms;
  double probability = 0.0;
};

inline ConditionalTerms conditional_terms(const FockVector& psi_in,
                                          const SqueezeParams& alpha,
                                          const SqueezeParams& beta,
                                          const MeasurementOutcome& outcome,
                                          CoeffCache* cache) {
  ConditionalTerms out;
  const long n = outcome.n;
  const long d = outcome.d();
  CompensatedSum<double> p;
  for (int k = 0; k <= psi_in.cutoff(); ++k) {
    const Complex c = psi_in[static_cast<std::size_t>(k)];
    if (c == Complex{}) continue;
    const long m = k + d;
    if (m < 0) continue;
    // d <= 0: S^{n+d}_m(-d; beta);  d > 0: S^n_{m-d}(d; beta)
    const Complex b = d <= 0 ? s_coeff(n + d, m, -d, beta, cache)
                             : s_coeff(n, m - d, d, beta, cache);
    if (b == Complex{}) continue;
    const Complex amp = b * s_coeff(m, 0, 0, alpha, cache) * c;
    out.terms.push_back({static_cast<int>(m), amp});
    p.add(std::norm(amp));
  }
  out.probability = p.value();
  return out;
}

}  // namespace detail

/// Bob's normalized conditional state and the probability of the outcome.
///
/// For d <= 0 the amplitude at m is S^{n+d}_m(-d; beta) S^m_0(0; alpha)
/// <m-d|psi_in>; for d > 0 it is S^n_{m-d}(d; beta) S^m_0(0; alpha)
/// <m-d|psi_in>, zero for m < d. The probability is the squared norm of
/// those amplitudes. The returned vector keeps the input cutoff unless the
/// shifted support needs more room.
///
/// Throws ImpossibleOutcomeError when the probability is at most
/// kImpossibleOutcomeThreshold.
inline ConditionalState conditional_state(const FockVector& psi_in,
                                          const SqueezeParams& alpha,
                                          const SqueezeParams& beta,
                                          const MeasurementOutcome& outcome,
                                          CoeffCache* cache = nullptr) {
  const auto ct =
      detail::conditional_terms(psi_in, alpha, beta, outcome, cache);
  if (!(ct.probability > kImpossibleOutcomeThreshold)) {
    throw ImpossibleOutcomeError(
        "outcome (n=" + std::to_string(outcome.n) +
        ", n'=" + std::to_string(outcome.n_prime) + ") has probability " +
        std::to_string(ct.probability));
  }
  int cutoff = psi_in.cutoff();
  for (const auto& t : ct.terms) cutoff = std::max(cutoff, t.m);
  FockVector raw(cutoff);
  for (const auto& t : ct.terms) raw[static_cast<std::size_t>(t.m)] = t.amplitude;
  auto [state, p] = normalize(raw, kImpossibleOutcomeThreshold);
  return {std::move(state), p};
}

/// Full protocol for one outcome: conditional state, Bob's shift (raise by
/// |d| for d < 0, lower by d for d > 0, nothing for d = 0) and fidelity
/// |<psi_in|psi_tel>|^2.
inline TeleportResult teleport_event(const FockVector& psi_in,
                                     const SqueezeParams& alpha,
                                     const SqueezeParams& beta,
                                     const MeasurementOutcome& outcome,
                                     CoeffCache* cache = nullptr) {
  auto cond = conditional_state(psi_in, alpha, beta, outcome, cache);
  const int d = outcome.d();
  FockVector shifted = cond.state;
  if (d < 0) {
    shifted = raise_shift(cond.state, -d);
  } else if (d > 0) {
    shifted = lower_shift(cond.state, d);
  }
  TeleportResult r;
  r.probability = cond.probability;
  if (d == 0) {
    r.psi_tel = cond.state;
  } else {
    r.psi_tel = normalize(shifted, kImpossibleOutcomeThreshold).first;
  }
  r.psi_out = std::move(cond.state);
  r.fidelity = fidelity(psi_in, r.psi_tel);
  return r;
}

/// Fidelity and probability of an outcome; impossible outcomes give {0, 0}.
/// Agrees with teleport_event up to rounding.
inline EventSummary evaluate_event(const FockVector& psi_in,
                                   const SqueezeParams& alpha,
                                   const SqueezeParams& beta,
                                   const MeasurementOutcome& outcome,
                                   CoeffCache* cache = nullptr) {
  const auto ct =
      detail::conditional_terms(psi_in, alpha, beta, outcome, cache);
  if (!(ct.probability > kImpossibleOutcomeThreshold)) return {};
  const long d = outcome.d();
  CompensatedSum<double> re;
  CompensatedSum<double> im;
  for (const auto& t : ct.terms) {
    // psi_tel amplitude at m - d is amplitude / sqrt(P)
    const Complex o = std::conj(psi_in.at(t.m - d)) * t.amplitude;
    re.add(o.real());
    im.add(o.imag());
  }
  const double f = std::norm(Complex{re.value(), im.value()}) / ct.probability;
  return {std::clamp(f, 0.0, 1.0), ct.probability};
}

}  // namespace condtel
