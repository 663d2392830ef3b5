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

// Sweeps over photon-count outcomes, the thresholded success probability and
// cutoff-doubling checks.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <exception>
#include <functional>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include "condtel/errors.hpp"
#include "condtel/fock.hpp"
#include "condtel/numeric.hpp"
#include "condtel/squeeze.hpp"
#include "condtel/teleport.hpp"

namespace condtel {

/// Default outcome window for grid and diagonal sweeps.
inline constexpr int kDefaultSweepNMax = 30;
inline constexpr double kConvergenceTolerance = 1e-6;

struct GridEntry {
  double fidelity = 0.0;
  double probability = 0.0;
  friend bool operator==(const GridEntry&, const GridEntry&) = default;
};

/// F(n, n') and P(n, n') for all n, n' <= n_max. Impossible outcomes are
/// stored as explicit zeros.
struct OutcomeGrid {
  FockVector input;
  SqueezeParams alpha;
  SqueezeParams beta;
  int n_max = 0;
  std::vector<GridEntry> entries;  ///< row-major in n, then n'

  int cutoff() const { return input.cutoff(); }

  const GridEntry& at(int n, int n_prime) const {
    if (n < 0 || n_prime < 0 || n > n_max || n_prime > n_max) {
      throw std::out_of_range("OutcomeGrid::at: outcome outside grid");
    }
    return entries[static_cast<std::size_t>(n) * (n_max + 1) + n_prime];
  }

  /// Sum of all probabilities, accumulated in row-major order.
  double total_probability() const {
    CompensatedSum<double> s;
    for (const auto& e : entries) s.add(e.probability);
    return s.value();
  }
};

struct SweepOptions {
  /// Worker threads; 0 picks std::thread::hardware_concurrency().
  unsigned workers = 0;
  /// Shared coefficient cache; a private one is used when null.
  CoeffCache* cache = nullptr;
};

namespace detail {

// Calls fn(i) for i in [0, count) on up to `workers` threads. Each index is
// handled exactly once, so results written per index do not depend on the
// worker count.
template <class Fn>
void parallel_for(std::size_t count, unsigned workers, Fn&& fn) {
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(
      std::min<std::size_t>(workers, std::max<std::size_t>(count, 1)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> threads;
  threads.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    threads.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < count; i += workers) fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace detail

/// Evaluates every outcome (n, n') with n, n' <= n_max.
///
/// Entries come from the closed-form conditional amplitudes, so they do not
/// depend on the state's cutoff; `n_max` must not exceed it so that the
/// grid stays within the space the cutoff describes.
inline OutcomeGrid sweep_grid(const FockVector& psi_in,
                              const SqueezeParams& alpha,
                              const SqueezeParams& beta, int n_max,
                              const SweepOptions& options = {}) {
  if (n_max < 0) throw std::invalid_argument("sweep_grid: n_max < 0");
  if (n_max > psi_in.cutoff()) {
    throw std::invalid_argument("sweep_grid: n_max " + std::to_string(n_max) +
                                " exceeds cutoff " +
                                std::to_string(psi_in.cutoff()));
  }
  CoeffCache local_cache;
  CoeffCache* cache = options.cache ? options.cache : &local_cache;
  OutcomeGrid grid{psi_in, alpha, beta, n_max, {}};
  const std::size_t side = static_cast<std::size_t>(n_max) + 1;
  grid.entries.resize(side * side);
  detail::parallel_for(side, options.workers, [&](std::size_t n) {
    for (std::size_t np = 0; np < side; ++np) {
      const auto e = evaluate_event(
          psi_in, alpha, beta,
          MeasurementOutcome(static_cast<int>(n), static_cast<int>(np)), cache);
      grid.entries[n * side + np] = {e.fidelity, e.probability};
    }
  });
  return grid;
}

using OutcomeFilter = std::function<bool(const MeasurementOutcome&)>;

inline OutcomeFilter accept_all() {
  return [](const MeasurementOutcome&) { return true; };
}

inline OutcomeFilter diagonal_only() {
  return [](const MeasurementOutcome& o) { return o.n == o.n_prime; };
}

/// Total probability of the outcomes that pass `filter` and reach fidelity
/// at least `threshold`. Summed in row-major order with compensation.
inline double conditional_success(const OutcomeGrid& grid, double threshold,
                                  const OutcomeFilter& filter = accept_all()) {
  CompensatedSum<double> s;
  for (int n = 0; n <= grid.n_max; ++n) {
    for (int np = 0; np <= grid.n_max; ++np) {
      const auto& e = grid.at(n, np);
      if (filter(MeasurementOutcome(n, np)) && e.fidelity >= threshold) {
        s.add(e.probability);
      }
    }
  }
  return s.value();
}

struct DiagonalPoint {
  int n = 0;
  double fidelity = 0.0;
  double probability = 0.0;
};

/// Outcomes with n = n' for n = 0..n_max; identical to the grid diagonal.
inline std::vector<DiagonalPoint> diagonal_sweep(
    const FockVector& psi_in, const SqueezeParams& alpha,
    const SqueezeParams& beta, int n_max, const SweepOptions& options = {}) {
  if (n_max < 0) throw std::invalid_argument("diagonal_sweep: n_max < 0");
  if (n_max > psi_in.cutoff()) {
    throw std::invalid_argument("diagonal_sweep: n_max exceeds cutoff");
  }
  CoeffCache local_cache;
  CoeffCache* cache = options.cache ? options.cache : &local_cache;
  std::vector<DiagonalPoint> out(static_cast<std::size_t>(n_max) + 1);
  detail::parallel_for(out.size(), options.workers, [&](std::size_t n) {
    const int ni = static_cast<int>(n);
    const auto e = evaluate_event(psi_in, alpha, beta,
                                  MeasurementOutcome(ni, ni), cache);
    out[n] = {ni, e.fidelity, e.probability};
  });
  return out;
}

/// Sum of diagonal probabilities with fidelity >= threshold.
inline double diagonal_success(const std::vector<DiagonalPoint>& diagonal,
                               double threshold) {
  CompensatedSum<double> s;
  for (const auto& p : diagonal) {
    if (p.fidelity >= threshold) s.add(p.probability);
  }
  return s.value();
}

// Quantities that convergence_check knows how to recompute.

/// Fidelity or probability of a single outcome.
struct CellQuantity {
  MeasurementOutcome outcome;
  bool probability = false;  ///< false selects the fidelity
};

/// Success probability over all outcomes n, n' <= cutoff.
struct SuccessQuantity {
  double threshold = 0.9;
  bool diagonal = false;
};

/// Real part of coeff_profile(n, d, alpha, beta, m)[m].
struct ProfileQuantity {
  int n = 0;
  int d = 0;
  int m = 0;
};

using Quantity = std::variant<CellQuantity, SuccessQuantity, ProfileQuantity>;

struct ConvergenceReport {
  std::string quantity;
  int cutoff = 0;
  double coarse = 0.0;  ///< value at cutoff
  double fine = 0.0;    ///< value at 2 * cutoff
  double difference = 0.0;
  double tolerance = kConvergenceTolerance;
  bool converged = false;
};

/// Recomputes `quantity` at `cutoff` and `2 * cutoff` and compares.
/// For SuccessQuantity the outcome window grows with the cutoff (n_max equals
/// the cutoff), so the check measures the probability mass still outside the
/// window. Cell and profile values come from closed forms and only change if
/// the input does not fit the smaller cutoff.
inline ConvergenceReport convergence_check(
    const FockVector& psi_in, const SqueezeParams& alpha,
    const SqueezeParams& beta, const Quantity& quantity, int cutoff,
    double tolerance = kConvergenceTolerance,
    const SweepOptions& options = {}) {
  if (cutoff < 0) throw std::invalid_argument("convergence_check: cutoff < 0");
  ConvergenceReport report;
  report.cutoff = cutoff;
  report.tolerance = tolerance;
  auto eval = [&](int n) -> double {
    const FockVector psi = psi_in.with_cutoff(n);
    return std::visit(
        [&](const auto& q) -> double {
          using Q = std::decay_t<decltype(q)>;
          if constexpr (std::is_same_v<Q, CellQuantity>) {
            const auto e = evaluate_event(psi, alpha, beta, q.outcome,
                                          options.cache);
            return q.probability ? e.probability : e.fidelity;
          } else if constexpr (std::is_same_v<Q, SuccessQuantity>) {
            const auto grid = sweep_grid(psi, alpha, beta, n, options);
            return conditional_success(
                grid, q.threshold, q.diagonal ? diagonal_only() : accept_all());
          } else {
            if (q.m > n) {
              throw std::invalid_argument(
                  "convergence_check: profile index beyond cutoff");
            }
            return coeff_profile(q.n, q.d, alpha, beta, q.m, options.cache)
                .back()
                .real();
          }
        },
        quantity);
  };
  report.quantity = std::visit(
      [](const auto& q) -> std::string {
        using Q = std::decay_t<decltype(q)>;
        if constexpr (std::is_same_v<Q, CellQuantity>) {
          return std::string(q.probability ? "probability" : "fidelity") +
                 "(n=" + std::to_string(q.outcome.n) +
                 ",nprime=" + std::to_string(q.outcome.n_prime) + ")";
        } else if constexpr (std::is_same_v<Q, SuccessQuantity>) {
          return std::string(q.diagonal ? "diagonal_" : "") + "P_u(F_u=" +
                 std::to_string(q.threshold) + ")";
        } else {
          return "profile(n=" + std::to_string(q.n) +
                 ",d=" + std::to_string(q.d) + ",m=" + std::to_string(q.m) +
                 ")";
        }
      },
      quantity);
  report.coarse = eval(cutoff);
  report.fine = eval(2 * cutoff);
  report.difference = std::abs(report.fine - report.coarse);
  report.converged = report.difference < tolerance;
  return report;
}

/// Throws NotConvergedError unless the report passed.
inline void ensure_converged(const ConvergenceReport& report) {
  if (!report.converged) {
    throw NotConvergedError(
        report.quantity + " changed by " + std::to_string(report.difference) +
        " between cutoffs " + std::to_string(report.cutoff) + " and " +
        std::to_string(2 * report.cutoff) + "; increase the cutoff");
  }
}

}  // namespace condtel
