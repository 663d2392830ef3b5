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

// Fock-basis matrix elements of the two-mode squeeze operator
//
//   S(alpha) = exp(conj(alpha) a_k a_l - alpha a_k^dag a_l^dag),
//   alpha = |alpha| e^{i phi}.
//
// Elements are evaluated from the closed-form finite sum over j, carried in
// log-magnitude form and re-summed in extended precision when the alternating
// terms cancel.
//
// Sign convention: the overall sign is the one of the exponential above,
// confirmed against a direct matrix exponential (see oracle.hpp). For real
// positive alpha this gives S|0,0> = sech r sum_n (-tanh r)^n |n,n>. A
// frequently quoted form of the closed-form sum carries (-1)^{n'} instead of
// (-1)^{m'}; that form equals the element of S(-alpha).

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <mutex>
#include <numbers>
#include <optional>
#include <shared_mutex>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "condtel/errors.hpp"
#include "condtel/fock.hpp"
#include "condtel/numeric.hpp"

namespace condtel {

/// Below this magnitude the squeezer is replaced by the identity; the
/// individual j-terms diverge like sinh^{-2j} while their sum tends to a
/// Kronecker delta.
inline constexpr double kIdentitySqueezeThreshold = 1e-8;

/// Squeezing parameter alpha = magnitude * exp(i phase), phase in [0, 2 pi).
struct SqueezeParams {
  double magnitude = 0.0;
  double phase = 0.0;

  SqueezeParams() = default;
  SqueezeParams(double magnitude_, double phase_ = 0.0)
      : magnitude(magnitude_), phase(phase_) {
    if (!std::isfinite(magnitude) || magnitude < 0.0) {
      throw std::invalid_argument("SqueezeParams: magnitude must be finite "
                                  "and non-negative");
    }
    if (!std::isfinite(phase)) {
      throw std::invalid_argument("SqueezeParams: non-finite phase");
    }
    constexpr double two_pi = 2.0 * std::numbers::pi;
    phase = std::fmod(phase, two_pi);
    if (phase < 0.0) phase += two_pi;
  }

  Complex value() const { return std::polar(magnitude, phase); }
  bool is_identity() const { return magnitude < kIdentitySqueezeThreshold; }

  friend bool operator==(const SqueezeParams&, const SqueezeParams&) = default;
};

/// Memo table for the phase-free (real) part of S^m_{m'}(d; |alpha|).
/// Safe for concurrent readers and writers. Stops inserting once full.
class CoeffCache {
 public:
  struct Key {
    long m;
    long m_prime;
    long d;
    double magnitude;
    bool operator==(const Key&) const = default;
  };

  explicit CoeffCache(std::size_t capacity = std::size_t{1} << 20)
      : capacity_(capacity) {}

  std::optional<double> find(const Key& key) const {
    std::shared_lock lock(mutex_);
    auto it = map_.find(key);
    if (it == map_.end()) return std::nullopt;
    return it->second;
  }

  void insert(const Key& key, double value) {
    std::unique_lock lock(mutex_);
    if (map_.size() >= capacity_) return;
    map_.emplace(key, value);
  }

  std::size_t size() const {
    std::shared_lock lock(mutex_);
    return map_.size();
  }

 private:
  struct KeyHash {
    std::size_t operator()(const Key& k) const noexcept {
      std::size_t h = std::hash<double>{}(k.magnitude);
      for (long v : {k.m, k.m_prime, k.d}) {
        h ^= std::hash<long>{}(v) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
      }
      return h;
    }
  };

  std::size_t capacity_;
  mutable std::shared_mutex mutex_;
  std::unordered_map<Key, double, KeyHash> map_;
};

namespace detail {

inline double log_cosh(double r) {
  return r + std::log1p(std::exp(-2.0 * r)) - std::numbers::ln2;
}

inline SeriesValue squeeze_series(const FactorialSeries& s, double r) {
  const double sh = std::sinh(r);
  return evaluate_series(s, -1.0 / (sh * sh), [r](auto tag) {
    using T = typename decltype(tag)::type;
    const T shr = sinh(T(r));
    return T(-1) / (shr * shr);
  });
}

inline void check_index(long v, const char* what) {
  if (v < 0) {
    throw std::invalid_argument(std::string(what) + ": negative Fock index");
  }
}

}  // namespace detail

/// <m, m'| S(alpha) |n, n'> with m, n in mode k and m', n' in mode l.
///
/// Nonzero only when m - m' == n - n' (the squeezer conserves the
/// photon-number difference). The magnitude is
///   sqrt(m! m'! n! n'!) sinh^{n'} tanh^{m'} / cosh^{n+1}
///   * | sum_{j=max(0,n'-n)}^{min(m',n')} (-sinh^2)^{-j}
///       / (j! (m'-j)! (n'-j)! (n-n'+j)!) |,
/// with sign (-1)^{m'} times the sign of the sum and phase
/// exp(i (m' - n') phi).
inline Complex matrix_element(long m, long m_prime, long n, long n_prime,
                              const SqueezeParams& params) {
  for (long v : {m, m_prime, n, n_prime}) {
    detail::check_index(v, "matrix_element");
  }
  if (m - m_prime != n - n_prime) return {};
  if (params.is_identity()) {
    return (m == n && m_prime == n_prime) ? Complex{1.0, 0.0} : Complex{};
  }
  const double r = params.magnitude;
  const double log_prefactor =
      0.5 * (log_factorial(m) + log_factorial(m_prime) + log_factorial(n) +
             log_factorial(n_prime)) +
      static_cast<double>(n_prime) * std::log(std::sinh(r)) +
      static_cast<double>(m_prime) * std::log(std::tanh(r)) -
      static_cast<double>(n + 1) * detail::log_cosh(r);
  FactorialSeries s;
  s.a = m_prime;
  s.b = n_prime;
  s.c = n - n_prime;
  s.lo = std::max(0L, n_prime - n);
  s.hi = std::min(m_prime, n_prime);
  const SeriesValue sum = detail::squeeze_series(s, r);
  if (sum.sign == 0) return {};
  const int sign = (m_prime % 2 == 0 ? 1 : -1) * sum.sign;
  const double magnitude = std::exp(log_prefactor + sum.log_abs);
  return std::polar(sign * magnitude,
                    static_cast<double>(m_prime - n_prime) * params.phase);
}

/// Phase-free part of S^m_{m'}(d; r), i.e. the coefficient at phi = 0.
inline double s_coeff_real(long m, long m_prime, long d, double r,
                           CoeffCache* cache = nullptr) {
  detail::check_index(m, "s_coeff");
  detail::check_index(m_prime, "s_coeff");
  if (m + d < 0 || m_prime + d < 0) {
    throw std::invalid_argument("s_coeff: m + d and m' + d must be >= 0");
  }
  if (r < kIdentitySqueezeThreshold) return m == m_prime ? 1.0 : 0.0;
  const CoeffCache::Key key{m, m_prime, d, r};
  if (cache) {
    if (auto hit = cache->find(key)) return *hit;
  }
  const double log_prefactor =
      0.5 * (log_factorial(m) + log_factorial(m_prime) + log_factorial(m + d) +
             log_factorial(m_prime + d)) +
      static_cast<double>(m + m_prime) * std::log(std::tanh(r)) -
      static_cast<double>(d + 1) * detail::log_cosh(r);
  FactorialSeries s;
  s.a = m;
  s.b = m_prime;
  s.c = d;
  s.lo = std::max(0L, -d);
  s.hi = std::min(m, m_prime);
  const SeriesValue sum = detail::squeeze_series(s, r);
  double value = 0.0;
  if (sum.sign != 0) {
    const int sign = (m % 2 == 0 ? 1 : -1) * sum.sign;
    value = sign * std::exp(log_prefactor + sum.log_abs);
  }
  if (cache) cache->insert(key, value);
  return value;
}

/// S^m_{m'}(d; alpha) = <m+d, m| S(alpha) |m'+d, m'>
///                    = <m, m+d| S(alpha) |m', m'+d>.
inline Complex s_coeff(long m, long m_prime, long d,
                       const SqueezeParams& params,
                       CoeffCache* cache = nullptr) {
  const double re = s_coeff_real(m, m_prime, d, params.magnitude, cache);
  if (params.is_identity() || re == 0.0) return {re, 0.0};
  return std::polar(re, static_cast<double>(m - m_prime) * params.phase);
}

/// Coefficient that multiplies <m - d|psi_in> in the conditional state for a
/// count of n photons in mode 0 and n + d in mode 1, for m = 0..m_max:
///   d <= 0:  S^{n+d}_m(-d; beta) S^m_0(0; alpha)
///   d >  0:  S^n_{m-d}(d; beta) S^m_0(0; alpha), zero for m < d.
inline std::vector<Complex> coeff_profile(long n, long d,
                                          const SqueezeParams& alpha,
                                          const SqueezeParams& beta,
                                          long m_max,
                                          CoeffCache* cache = nullptr) {
  detail::check_index(n, "coeff_profile");
  if (n + d < 0) {
    throw std::invalid_argument("coeff_profile: n + d must be >= 0");
  }
  if (m_max < 0) throw std::invalid_argument("coeff_profile: m_max < 0");
  std::vector<Complex> out(static_cast<std::size_t>(m_max) + 1);
  for (long m = 0; m <= m_max; ++m) {
    Complex b;
    if (d <= 0) {
      b = s_coeff(n + d, m, -d, beta, cache);
    } else if (m >= d) {
      b = s_coeff(n, m - d, d, beta, cache);
    } else {
      continue;
    }
    out[static_cast<std::size_t>(m)] = b * s_coeff(m, 0, 0, alpha, cache);
  }
  return out;
}

/// (max |c| - min |c|) / max |c| over entries lo..hi of a profile.
inline double profile_relative_variation(const std::vector<Complex>& profile,
                                         std::size_t lo, std::size_t hi) {
  if (hi >= profile.size() || lo > hi) {
    throw std::invalid_argument("profile_relative_variation: bad range");
  }
  double mx = 0.0;
  double mn = std::abs(profile[lo]);
  for (std::size_t m = lo; m <= hi; ++m) {
    mx = std::max(mx, std::abs(profile[m]));
    mn = std::min(mn, std::abs(profile[m]));
  }
  return mx == 0.0 ? 0.0 : (mx - mn) / mx;
}

}  // namespace condtel
