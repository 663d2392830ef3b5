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

// Numerical building blocks: log-factorials, compensated summation and a
// cancellation-aware evaluator for terminating alternating factorial series.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "condtel/errors.hpp"

namespace condtel {

/// Estimated relative error above which a series counts as lost to
/// cancellation (PrecisionLossError once every precision tier is exhausted).
inline constexpr double kCancellationTolerance = 1e-8;

/// Estimated relative error a result must meet to be accepted without moving
/// to the next precision tier.
inline constexpr double kAcceptTolerance = 1e-13;

/// Absolute error below which a double-precision result is accepted even
/// when its relative error exceeds kAcceptTolerance (but not
/// kCancellationTolerance). Only used when the caller supplies the log of the
/// prefactor multiplying the series.
inline constexpr double kAbsoluteTolerance = 1e-12;

namespace detail {

inline constexpr std::size_t kLogFactorialTableSize = std::size_t{1} << 16;

inline const std::vector<double>& log_factorial_table() {
  static const std::vector<double> table = [] {
    std::vector<double> t(kLogFactorialTableSize);
    for (std::size_t n = 0; n < t.size(); ++n) {
      t[n] = std::lgamma(static_cast<double>(n) + 1.0);
    }
    return t;
  }();
  return table;
}

}  // namespace detail

/// ln(n!) for n >= 0.
inline double log_factorial(long n) {
  if (n < 0) {
    throw std::invalid_argument("log_factorial: negative argument " +
                                std::to_string(n));
  }
  const auto& table = detail::log_factorial_table();
  if (static_cast<std::size_t>(n) < table.size()) {
    return table[static_cast<std::size_t>(n)];
  }
  return std::lgamma(static_cast<double>(n) + 1.0);
}

/// Neumaier's variant of Kahan summation. Order-dependent, so callers that
/// need reproducibility must feed terms in a fixed order.
template <class T = double>
class CompensatedSum {
 public:
  void add(T x) {
    const T t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  CompensatedSum& operator+=(T x) {
    add(x);
    return *this;
  }
  T value() const { return sum_ + comp_; }

 private:
  T sum_{};
  T comp_{};
};

/// One term of an alternating series held as log-magnitude and sign so that
/// factorial ratios far outside the double range stay representable.
struct LogTerm {
  double log_magnitude = -std::numeric_limits<double>::infinity();
  int sign = 0;
};

/// The terminating series  sum_{j=lo..hi} z^j / (j! (a-j)! (b-j)! (c+j)!).
/// The (b-j)! factor is dropped when `b` is empty. Both the two-mode squeeze
/// matrix elements and associated Laguerre polynomials have this shape.
struct FactorialSeries {
  long a = 0;
  std::optional<long> b;
  long c = 0;
  long lo = 0;
  long hi = -1;

  bool empty() const { return hi < lo; }
  long size() const { return empty() ? 0 : hi - lo + 1; }
};

/// Value of a series as sign * exp(log_abs). `digits` records the decimal
/// precision that produced it (16 for the double path).
struct SeriesValue {
  double log_abs = -std::numeric_limits<double>::infinity();
  int sign = 0;
  int digits = 16;

  double value() const {
    return sign == 0 ? 0.0 : sign * std::exp(log_abs);
  }
};

template <unsigned Digits>
using BigFloat = boost::multiprecision::number<
    boost::multiprecision::cpp_bin_float<Digits>,
    boost::multiprecision::et_off>;

/// Type tag handed to the exact-argument callback of evaluate_series.
template <class T>
struct PrecisionTag {
  using type = T;
};

namespace detail {

inline double log_term(const FactorialSeries& s, long j, double log_abs_z) {
  double v = static_cast<double>(j) * log_abs_z - log_factorial(j) -
             log_factorial(s.a - j) - log_factorial(s.c + j);
  if (s.b) v -= log_factorial(*s.b - j);
  return v;
}

template <class T>
std::optional<SeriesValue> evaluate_series_extended(const FactorialSeries& s,
                                                    const T& z,
                                                    double log_first,
                                                    int first_sign,
                                                    int digits,
                                                    bool last_tier = false) {
  T term = first_sign;
  T sum = 0;
  T abs_sum = 0;
  for (long j = s.lo; j <= s.hi; ++j) {
    sum += term;
    abs_sum += abs(term);
    if (j < s.hi) {
      T ratio = z * T(s.a - j) / (T(j + 1) * T(s.c + j + 1));
      if (s.b) ratio *= T(*s.b - j);
      term *= ratio;
    }
  }
  const T eps = std::numeric_limits<T>::epsilon();
  const T bound = abs_sum * eps * T(s.size());
  SeriesValue out;
  out.digits = digits;
  if (abs(sum) <= bound) {
    // Indistinguishable from zero at this precision. At the last tier that is
    // reported as an exact zero (a genuine root, e.g. of a Laguerre
    // polynomial); the absolute error is then below 1e-390 of the summed
    // term magnitudes.
    if (last_tier) return out;
    return std::nullopt;
  }
  const double limit = last_tier ? kCancellationTolerance : kAcceptTolerance;
  if (bound / abs(sum) > T(limit)) return std::nullopt;
  out.log_abs = log_first + static_cast<double>(log(abs(sum)));
  out.sign = sum < 0 ? -1 : 1;
  return out;
}

}  // namespace detail

namespace detail {

// Accepts the compensated sum of `terms` (relative to a common scale) when
// the estimated relative error (sum |t|) * term_eps / |sum t| is small
// enough.
inline std::optional<SeriesValue> accept_double_sum(std::vector<double>& terms,
                                                    double log_scale,
                                                    double term_eps,
                                                    double log_prefactor) {
  std::sort(terms.begin(), terms.end(),
            [](double x, double y) { return std::abs(x) > std::abs(y); });
  CompensatedSum<double> sum;
  double abs_sum = 0.0;
  for (double v : terms) {
    sum.add(v);
    abs_sum += std::abs(v);
  }
  const double total = sum.value();
  if (total == 0.0) return std::nullopt;
  const double rel = abs_sum * term_eps / std::abs(total);
  if (rel > kAcceptTolerance) {
    // tiny results may keep a larger relative error
    if (std::isnan(log_prefactor) || rel > kCancellationTolerance) return std::nullopt;
    const double log_value = log_prefactor + log_scale + std::log(std::abs(total));
    if (log_value + std::log(rel) > std::log(kAbsoluteTolerance)) return std::nullopt;
  }
  SeriesValue out;
  out.log_abs = log_scale + std::log(std::abs(total));
  out.sign = total < 0.0 ? -1 : 1;
  return out;
}

// Terms relative to the first one, by the ratio recurrence; each carries a
// relative error of a few eps per step. Empty when the ratios overflow.
inline std::vector<double> ratio_terms(const FactorialSeries& s, double z,
                                       int first_sign) {
  constexpr double kOverflowGuard = 1e280;
  std::vector<double> terms;
  terms.reserve(static_cast<std::size_t>(s.size()));
  double t = first_sign;
  for (long j = s.lo; j <= s.hi; ++j) {
    terms.push_back(t);
    if (j == s.hi) break;
    double ratio = z * static_cast<double>(s.a - j) /
                   (static_cast<double>(j + 1) * static_cast<double>(s.c + j + 1));
    if (s.b) ratio *= static_cast<double>(*s.b - j);
    t *= ratio;
    if (!(std::abs(t) < kOverflowGuard)) return {};
  }
  return terms;
}

}  // namespace detail

/// Evaluates a FactorialSeries with argument z.
///
/// In double precision the terms are generated relative to the first one by
/// their ratio recurrence, sorted by decreasing magnitude and summed with
/// compensation; the first term's magnitude comes from the log-factorial
/// table. When the ratios would overflow, every term is instead built in log
/// form and rescaled by the largest. The relative error is estimated as
/// (sum |t|) * eps_t / |sum t| with eps_t the per-term rounding (a few eps per
/// recurrence step, or eps times the log magnitude for log-form terms). If it
/// exceeds kAcceptTolerance the series is recomputed in 50, 100, 200 and
/// finally 400 decimal digits with the ratio recurrence. `exact_z` receives
/// a PrecisionTag<T> and must return z computed in T. If `log_prefactor`
/// (the log of the factor the caller multiplies the series by) is given, a
/// double result whose absolute error after that factor stays below
/// kAbsoluteTolerance is accepted up to kCancellationTolerance.
///
/// Throws PrecisionLossError when the 400-digit estimate still exceeds
/// kCancellationTolerance.
template <class ExactZ>
SeriesValue evaluate_series(const FactorialSeries& s, double z,
                            ExactZ&& exact_z,
                            double log_prefactor = std::numeric_limits<double>::quiet_NaN()) {
  SeriesValue out;
  if (s.empty()) return out;
  if (z == 0.0) {
    // only the j = 0 term survives, and only when it is in range
    if (s.lo > 0) return out;
    out.log_abs = detail::log_term(s, 0, 0.0);
    out.sign = 1;
    return out;
  }

  constexpr double eps = std::numeric_limits<double>::epsilon();
  const double log_abs_z = std::log(std::abs(z));
  const bool alternating = z < 0.0;
  const double log_first = detail::log_term(s, s.lo, log_abs_z);
  const int first_sign = (alternating && (s.lo % 2 != 0)) ? -1 : 1;

  if (auto terms = detail::ratio_terms(s, z, first_sign); !terms.empty()) {
    const double term_eps = eps * (4.0 * static_cast<double>(s.size()) + 2.0);
    if (auto v = detail::accept_double_sum(terms, log_first, term_eps, log_prefactor)) return *v;
  } else {
    std::vector<LogTerm> logs;
    logs.reserve(static_cast<std::size_t>(s.size()));
    double max_log = -std::numeric_limits<double>::infinity();
    double log_scale = 1.0;
    for (long j = s.lo; j <= s.hi; ++j) {
      LogTerm t;
      t.log_magnitude = detail::log_term(s, j, log_abs_z);
      t.sign = (alternating && (j % 2 != 0)) ? -1 : 1;
      max_log = std::max(max_log, t.log_magnitude);
      log_scale = std::max(log_scale, std::abs(t.log_magnitude) + 1.0);
      logs.push_back(t);
    }
    std::vector<double> scaled;
    scaled.reserve(logs.size());
    for (const auto& t : logs) {
      scaled.push_back(t.sign * std::exp(t.log_magnitude - max_log));
    }
    // each log-form term inherits the rounding of its log magnitude
    if (auto v = detail::accept_double_sum(scaled, max_log, eps * log_scale,
                                             log_prefactor)) {
      return *v;
    }
  }

  if (auto v = detail::evaluate_series_extended(
          s, exact_z(PrecisionTag<BigFloat<50>>{}), log_first, first_sign, 50)) {
    return *v;
  }
  if (auto v = detail::evaluate_series_extended(
          s, exact_z(PrecisionTag<BigFloat<100>>{}), log_first, first_sign, 100)) {
    return *v;
  }
  if (auto v = detail::evaluate_series_extended(
          s, exact_z(PrecisionTag<BigFloat<200>>{}), log_first, first_sign, 200)) {
    return *v;
  }
  if (auto v = detail::evaluate_series_extended(
          s, exact_z(PrecisionTag<BigFloat<400>>{}), log_first, first_sign, 400, true)) {
    return *v;
  }
  throw PrecisionLossError(
      "alternating series lost more than 390 digits to cancellation (" +
      std::to_string(s.size()) + " terms)");
}

}  // namespace condtel
