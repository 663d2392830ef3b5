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

// Quadrature-measurement teleportation with a two-mode squeezed vacuum
// resource, simulated in the Fock basis, as a baseline for the photon-counting
// scheme.
//
// Conventions: x = (a + a^dag)/sqrt(2), p = (a - a^dag)/(i sqrt(2)), so
// [x, p] = i. Alice measures x_u = (x_0 - x_1)/sqrt(2) and
// p_v = (p_0 + p_1)/sqrt(2) on the input (mode 0) and her half of the
// resource (mode 1). Their joint eigenstates are D_0(beta) sum_n |n, n> /
// sqrt(pi) with beta = x_u + i p_v, so for outcome (x, p) Bob's mode holds
//   c_m = t_m <m| D(-beta) |psi_in> / sqrt(pi),
// t_m being the resource amplitudes <m, m| S(r) |0, 0>. Bob removes the
// resource phase e^{i m theta}, theta = arg(t_1 / t_0), and displaces by
// gain * beta. With unit gain the fidelity tends to one as r grows.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <string>
#include <vector>

#include "condtel/analysis.hpp"
#include "condtel/errors.hpp"
#include "condtel/fock.hpp"
#include "condtel/numeric.hpp"
#include "condtel/squeeze.hpp"

namespace condtel {

inline constexpr double kZeroDensityThreshold = 1e-300;

/// k-th normalized oscillator eigenfunction psi_k(x), from the three-term
/// recurrence on normalized functions. The running values are rescaled to
/// stay inside the double range, so large |x| underflows only at the end.
inline double hermite_wavefunction(int k, double x) {
  if (k < 0) throw std::invalid_argument("hermite_wavefunction: k < 0");
  // h_j = psi_j(x) * exp(x^2 / 2) * pi^{1/4} * exp(-log_scale)
  double log_scale = 0.0;
  double prev = 0.0;
  double cur = 1.0;
  for (int j = 0; j < k; ++j) {
    const double next = std::sqrt(2.0 / (j + 1)) * x * cur -
                        std::sqrt(static_cast<double>(j) / (j + 1)) * prev;
    prev = cur;
    cur = next;
    if (std::abs(cur) > 1e150) {
      cur *= 1e-150;
      prev *= 1e-150;
      log_scale += 150.0 * std::numbers::ln10;
    }
  }
  if (cur == 0.0) return 0.0;
  const double log_abs = std::log(std::abs(cur)) + log_scale - 0.5 * x * x -
                         0.25 * std::log(std::numbers::pi);
  return (cur < 0.0 ? -1.0 : 1.0) * std::exp(log_abs);
}

/// <m| D(amount) |k> with D(g) = exp(g a^dag - conj(g) a), from
///   m >= k:  sqrt(k!/m!) g^{m-k} e^{-|g|^2/2} L_k^{(m-k)}(|g|^2)
///   m <  k:  sqrt(m!/k!) (-conj g)^{k-m} e^{-|g|^2/2} L_m^{(k-m)}(|g|^2),
/// with the Laguerre sum evaluated like the squeeze sums.
inline Complex displacement_element(long m, long k, Complex amount) {
  if (m < 0 || k < 0) {
    throw std::invalid_argument("displacement_element: negative index");
  }
  const double x = std::norm(amount);
  if (x == 0.0) return m == k ? Complex{1.0, 0.0} : Complex{};
  const long lo = std::min(m, k);
  const long gap = std::abs(m - k);
  // L_lo^{(gap)}(x) = (lo+gap)! sum_i (-x)^i / (i! (lo-i)! (gap+i)!)
  FactorialSeries s;
  s.a = lo;
  s.c = gap;
  s.lo = 0;
  s.hi = lo;
  const double re = amount.real();
  const double im = amount.imag();
  const double log_prefactor = 0.5 * (log_factorial(lo) - log_factorial(lo + gap)) +
                               static_cast<double>(gap) * 0.5 * std::log(x) -
                               0.5 * x + log_factorial(lo + gap);
  const SeriesValue lag = evaluate_series(
      s, -x,
      [re, im](auto tag) {
        using T = typename decltype(tag)::type;
        const T a(re);
        const T b(im);
        return -(a * a + b * b);
      },
      log_prefactor);
  if (lag.sign == 0) return {};
  const double log_mag = log_prefactor + lag.log_abs;
  // phase of g^{m-k} or (-conj g)^{k-m}
  const double arg = std::arg(amount);
  const double phase = m >= k ? static_cast<double>(gap) * arg
                              : static_cast<double>(gap) * (std::numbers::pi - arg);
  return std::polar(lag.sign * std::exp(log_mag), phase);
}

/// D(amount) |state>, truncated at `cutoff`. Elements come from
/// displacement_element; the ladder recurrence
/// D|k+1> = (a^dag - conj(g)) D|k> / sqrt(k+1) is faster but loses accuracy
/// quickly once |g| and k grow.
inline FockVector displace(const FockVector& state, Complex amount,
                           int cutoff) {
  const int top = state.top_index();
  FockVector out(cutoff);
  for (int m = 0; m <= cutoff; ++m) {
    CompensatedSum<double> re;
    CompensatedSum<double> im;
    for (int k = 0; k <= top; ++k) {
      const Complex c = state[static_cast<std::size_t>(k)];
      if (c == Complex{}) continue;
      const Complex v = displacement_element(m, k, amount) * c;
      re.add(v.real());
      im.add(v.imag());
    }
    out[static_cast<std::size_t>(m)] = {re.value(), im.value()};
  }
  return out;
}

struct QuadratureOutcome {
  double x = 0.0;  ///< value of (x_0 - x_1)/sqrt(2)
  double p = 0.0;  ///< value of (p_0 + p_1)/sqrt(2)
};

struct BKConfig {
  double r = 1.5;            ///< resource squeezing magnitude
  double half_width = 8.0;   ///< outcome grid covers [-L, L]^2
  double step = 0.05;        ///< outcome grid spacing h
  double gain = 1.0;         ///< Bob's displacement is gain * (x + i p)
  int cutoff = 100;          ///< Fock truncation of Bob's mode

  int points_per_axis() const {
    return static_cast<int>(std::lround(2.0 * half_width / step)) + 1;
  }

  double coordinate(int i) const { return -half_width + i * step; }

  void validate() const {
    if (!std::isfinite(r) || r < 0.0) {
      throw std::invalid_argument("BKConfig: r must be finite and >= 0");
    }
    if (!(half_width > 0.0) || !(step > 0.0)) {
      throw std::invalid_argument("BKConfig: L and h must be positive");
    }
    const double ratio = half_width / step;
    if (std::abs(ratio - std::round(ratio)) > 1e-9 * std::max(1.0, ratio)) {
      throw std::invalid_argument("BKConfig: L/h must be an integer");
    }
    if (!std::isfinite(gain)) throw std::invalid_argument("BKConfig: gain");
    if (cutoff < 1) throw std::invalid_argument("BKConfig: cutoff < 1");
  }
};

struct BkConditional {
  FockVector state;  ///< Bob's corrected state, normalized
  double density = 0.0;  ///< joint density of (x, p)
};

namespace detail {

// |t_m| for m <= cutoff and the resource phase step theta.
struct BkResource {
  std::vector<double> magnitude;
  double theta = 0.0;
};

inline BkResource bk_resource(double r, int cutoff) {
  BkResource res;
  res.magnitude.resize(static_cast<std::size_t>(cutoff) + 1);
  const SqueezeParams params(r);
  std::vector<Complex> t(res.magnitude.size());
  for (int m = 0; m <= cutoff; ++m) {
    t[static_cast<std::size_t>(m)] = s_coeff(m, 0, 0, params);
    res.magnitude[static_cast<std::size_t>(m)] =
        std::abs(t[static_cast<std::size_t>(m)]);
  }
  if (cutoff >= 1 && t[1] != Complex{}) res.theta = std::arg(t[1] / t[0]);
  return res;
}

inline void check_bk_input(const FockVector& psi_in, const BKConfig& cfg) {
  cfg.validate();
  if (psi_in.top_index() > cfg.cutoff) {
    throw std::invalid_argument("bk: input support exceeds BKConfig::cutoff");
  }
}

// Bob's state after the phase correction but before the displacement:
// amplitudes |t_m| chi_m / sqrt(pi) with chi = D(-beta) psi_in.
inline FockVector bob_raw_state(const FockVector& psi_in,
                                const BkResource& res, Complex beta,
                                int cutoff) {
  FockVector chi = displace(psi_in, -beta, cutoff);
  const double inv_sqrt_pi = 1.0 / std::sqrt(std::numbers::pi);
  for (int m = 0; m <= cutoff; ++m) {
    chi[static_cast<std::size_t>(m)] *=
        res.magnitude[static_cast<std::size_t>(m)] * inv_sqrt_pi;
  }
  return chi;
}

inline BkConditional finish_conditional(const FockVector& raw, Complex shift,
                                        int cutoff) {
  const double density = raw.norm_squared();
  if (!(density > kZeroDensityThreshold)) {
    throw ZeroDensityError("bk_conditional: density " +
                           std::to_string(density));
  }
  const FockVector phi = raw.scaled(1.0 / std::sqrt(density));
  const FockVector tel = displace(phi, shift, cutoff);
  return {normalize(tel, 0.0).first, density};
}

}  // namespace detail

/// Bob's corrected conditional state and the joint density of the outcome
/// (x, p), computed through the Fock-basis Bell projection.
inline BkConditional bk_conditional(const FockVector& psi_in,
                                    const BKConfig& cfg,
                                    const QuadratureOutcome& outcome) {
  detail::check_bk_input(psi_in, cfg);
  const auto res = detail::bk_resource(cfg.r, cfg.cutoff);
  const Complex beta{outcome.x, outcome.p};
  const FockVector raw =
      detail::bob_raw_state(psi_in, res, beta, cfg.cutoff);
  return detail::finish_conditional(raw, cfg.gain * beta, cfg.cutoff);
}

/// Same quantity as bk_conditional, computed in the position representation:
/// the input and resource mode are projected onto the x_u, p_v eigenstate by
/// direct quadrature of the wavefunctions,
///   c_m = t_m / sqrt(pi) * int dx e^{-i sqrt2 p x} psi_in(x)
///                                 psi_m(x - sqrt2 x_u).
/// `x_half` and `dx` set the trapezoid grid.
inline BkConditional bk_conditional_position(const FockVector& psi_in,
                                             const BKConfig& cfg,
                                             const QuadratureOutcome& outcome,
                                             double x_half = 20.0,
                                             double dx = 0.01) {
  detail::check_bk_input(psi_in, cfg);
  const auto res = detail::bk_resource(cfg.r, cfg.cutoff);
  const int points = static_cast<int>(std::lround(2.0 * x_half / dx)) + 1;
  const double shift = std::sqrt(2.0) * outcome.x;
  std::vector<Complex> weighted(static_cast<std::size_t>(points));
  std::vector<double> grid(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) {
    const double x = -x_half + i * dx;
    grid[static_cast<std::size_t>(i)] = x;
    Complex psi_x{};
    for (int k = 0; k <= psi_in.cutoff(); ++k) {
      const Complex c = psi_in[static_cast<std::size_t>(k)];
      if (c != Complex{}) psi_x += c * hermite_wavefunction(k, x);
    }
    weighted[static_cast<std::size_t>(i)] =
        std::polar(1.0, -std::sqrt(2.0) * outcome.p * x) * psi_x;
  }
  FockVector raw(cfg.cutoff);
  const double inv_sqrt_pi = 1.0 / std::sqrt(std::numbers::pi);
  for (int m = 0; m <= cfg.cutoff; ++m) {
    Complex integral{};
    for (int i = 0; i < points; ++i) {
      const double w = (i == 0 || i == points - 1) ? 0.5 * dx : dx;
      integral += w * weighted[static_cast<std::size_t>(i)] *
                  hermite_wavefunction(m, grid[static_cast<std::size_t>(i)] -
                                              shift);
    }
    // resource amplitude with its phase removed by Bob's rotation
    raw[static_cast<std::size_t>(m)] =
        res.magnitude[static_cast<std::size_t>(m)] * inv_sqrt_pi * integral;
  }
  return detail::finish_conditional(raw, cfg.gain * Complex{outcome.x, outcome.p},
                                    cfg.cutoff);
}

struct BkOutcomePoint {
  double x = 0.0;
  double p = 0.0;
  double fidelity = 0.0;
  double density = 0.0;
};

/// Fidelity and density on every grid outcome, x-major. Fidelities use
/// F = |<D(-g beta) psi_in | phi>|^2 with phi Bob's state before his
/// displacement, which avoids building D(g beta) on the full space.
inline std::vector<BkOutcomePoint> bk_outcome_map(const FockVector& psi_in,
                                                  const BKConfig& cfg,
                                                  unsigned workers = 0) {
  detail::check_bk_input(psi_in, cfg);
  const auto res = detail::bk_resource(cfg.r, cfg.cutoff);
  const int side = cfg.points_per_axis();
  std::vector<BkOutcomePoint> out(static_cast<std::size_t>(side) * side);
  detail::parallel_for(static_cast<std::size_t>(side), workers,
                       [&](std::size_t i) {
    const double x = cfg.coordinate(static_cast<int>(i));
    for (int j = 0; j < side; ++j) {
      const double p = cfg.coordinate(j);
      const Complex beta{x, p};
      const FockVector raw =
          detail::bob_raw_state(psi_in, res, beta, cfg.cutoff);
      const double density = raw.norm_squared();
      double f = 0.0;
      if (density > kZeroDensityThreshold) {
        const FockVector xi =
            cfg.gain == 1.0 ? FockVector{}
                            : displace(psi_in, -cfg.gain * beta, cfg.cutoff);
        Complex overlap;
        if (cfg.gain == 1.0) {
          // xi = chi = raw / (|t_m| / sqrt(pi)) componentwise
          const double sqrt_pi = std::sqrt(std::numbers::pi);
          CompensatedSum<double> re;
          CompensatedSum<double> im;
          for (int m = 0; m <= cfg.cutoff; ++m) {
            const double t = res.magnitude[static_cast<std::size_t>(m)];
            if (t == 0.0) continue;
            const Complex c = raw[static_cast<std::size_t>(m)];
            const Complex v = std::norm(c) * sqrt_pi / t;
            re.add(v.real());
            im.add(v.imag());
          }
          overlap = {re.value(), im.value()};
        } else {
          overlap = inner_product(xi, raw);
        }
        f = std::clamp(std::norm(overlap) / density, 0.0, 1.0);
      }
      out[i * static_cast<std::size_t>(side) + static_cast<std::size_t>(j)] =
          {x, p, f, density};
    }
  });
  return out;
}

struct BkSummary {
  double r = 0.0;
  double threshold = 0.0;
  double success_probability = 0.0;
  double total_probability = 0.0;
  double half_width = 0.0;
  double step = 0.0;
};

inline BkSummary bk_summarize(const std::vector<BkOutcomePoint>& map,
                              const BKConfig& cfg, double threshold) {
  CompensatedSum<double> pu;
  CompensatedSum<double> total;
  const double w = cfg.step * cfg.step;
  for (const auto& pt : map) {
    total.add(pt.density * w);
    if (pt.fidelity >= threshold) pu.add(pt.density * w);
  }
  return {cfg.r, threshold, pu.value(), total.value(), cfg.half_width,
          cfg.step};
}

/// Probability that a quadrature outcome yields fidelity >= threshold,
/// integrated over the configured outcome grid with weight h^2.
inline double bk_pu(const FockVector& psi_in, const BKConfig& cfg,
                    double threshold, unsigned workers = 0) {
  return bk_summarize(bk_outcome_map(psi_in, cfg, workers), cfg, threshold)
      .success_probability;
}

}  // namespace condtel
