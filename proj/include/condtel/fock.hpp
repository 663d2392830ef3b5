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

// Truncated single-mode Fock-space state vectors.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "condtel/errors.hpp"
#include "condtel/numeric.hpp"

namespace condtel {

using Complex = std::complex<double>;

inline constexpr int kDefaultCutoff = 60;
inline constexpr double kZeroNormThreshold = 1e-14;
inline constexpr double kUnitNormTolerance = 1e-9;

/// Amplitudes <k|psi> for k = 0..cutoff. Vectors need not be normalized:
/// conditional states are carried unnormalized until divided by the square
/// root of their probability.
class FockVector {
 public:
  FockVector() : amplitudes_(1, Complex{0.0, 0.0}) {}

  /// Zero vector with `cutoff + 1` entries.
  explicit FockVector(int cutoff) {
    if (cutoff < 0) {
      throw std::invalid_argument("FockVector: negative cutoff");
    }
    amplitudes_.assign(static_cast<std::size_t>(cutoff) + 1, Complex{});
  }

  /// Number state |k> truncated at `cutoff`.
  static FockVector basis(int k, int cutoff = kDefaultCutoff) {
    if (k < 0 || k > cutoff) {
      throw std::invalid_argument("FockVector::basis: index " +
                                  std::to_string(k) + " outside [0, " +
                                  std::to_string(cutoff) + "]");
    }
    FockVector v(cutoff);
    v.amplitudes_[static_cast<std::size_t>(k)] = 1.0;
    return v;
  }

  int cutoff() const { return static_cast<int>(amplitudes_.size()) - 1; }
  std::size_t size() const { return amplitudes_.size(); }

  Complex operator[](std::size_t k) const { return amplitudes_[k]; }
  Complex& operator[](std::size_t k) { return amplitudes_[k]; }

  /// Amplitude at k, or zero outside [0, cutoff].
  Complex at(long k) const {
    if (k < 0 || k > cutoff()) return Complex{};
    return amplitudes_[static_cast<std::size_t>(k)];
  }

  std::span<const Complex> amplitudes() const { return amplitudes_; }

  double norm_squared() const {
    CompensatedSum<double> s;
    for (const auto& a : amplitudes_) s.add(std::norm(a));
    return s.value();
  }

  /// Largest index with a nonzero amplitude, or -1 for the zero vector.
  int top_index() const {
    for (int k = cutoff(); k >= 0; --k) {
      if (amplitudes_[static_cast<std::size_t>(k)] != Complex{}) return k;
    }
    return -1;
  }

  /// Same amplitudes, zero-padded (or checked-truncated) to a new cutoff.
  FockVector with_cutoff(int new_cutoff) const {
    if (new_cutoff < top_index()) {
      throw TruncationOverflowError(
          "with_cutoff: nonzero amplitude at index " +
          std::to_string(top_index()) + " exceeds cutoff " +
          std::to_string(new_cutoff));
    }
    FockVector v(new_cutoff);
    const auto n = std::min(v.size(), size());
    std::copy_n(amplitudes_.begin(), n, v.amplitudes_.begin());
    return v;
  }

  FockVector scaled(Complex factor) const {
    FockVector v = *this;
    for (auto& a : v.amplitudes_) a *= factor;
    return v;
  }

  friend bool operator==(const FockVector&, const FockVector&) = default;

 private:
  std::vector<Complex> amplitudes_;
};

/// Builds a state from leading amplitudes, zero-padded to cutoff + 1 entries.
/// Does not normalize.
inline FockVector make_state(std::span<const Complex> amplitudes,
                             int cutoff = kDefaultCutoff) {
  if (cutoff < 0) throw std::invalid_argument("make_state: negative cutoff");
  if (amplitudes.size() > static_cast<std::size_t>(cutoff) + 1) {
    throw std::invalid_argument("make_state: " +
                                std::to_string(amplitudes.size()) +
                                " amplitudes do not fit cutoff " +
                                std::to_string(cutoff));
  }
  FockVector v(cutoff);
  for (std::size_t k = 0; k < amplitudes.size(); ++k) {
    const Complex a = amplitudes[k];
    if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) {
      throw std::invalid_argument("make_state: non-finite amplitude at index " +
                                  std::to_string(k));
    }
    v[k] = a;
  }
  return v;
}

inline FockVector make_state(std::initializer_list<Complex> amplitudes,
                             int cutoff = kDefaultCutoff) {
  return make_state(std::span<const Complex>(amplitudes.begin(),
                                             amplitudes.size()),
                    cutoff);
}

/// <a|b>; the shorter vector is treated as zero-padded.
inline Complex inner_product(const FockVector& a, const FockVector& b) {
  const std::size_t n = std::min(a.size(), b.size());
  CompensatedSum<double> re;
  CompensatedSum<double> im;
  for (std::size_t k = 0; k < n; ++k) {
    const Complex t = std::conj(a[k]) * b[k];
    re.add(t.real());
    im.add(t.imag());
  }
  return {re.value(), im.value()};
}

/// |<a|b>|^2 for unit-norm a and b.
inline double fidelity(const FockVector& a, const FockVector& b) {
  for (const FockVector* v : {&a, &b}) {
    const double n2 = v->norm_squared();
    if (std::abs(std::sqrt(n2) - 1.0) > kUnitNormTolerance) {
      throw NormalizationError("fidelity: argument has norm " +
                               std::to_string(std::sqrt(n2)));
    }
  }
  return std::clamp(std::norm(inner_product(a, b)), 0.0, 1.0);
}

/// E^d with E = sum_n |n><n+1|: amplitude k of the result is amplitude k + d
/// of the input. The lowest d amplitudes are discarded.
inline FockVector lower_shift(const FockVector& state, int d) {
  if (d < 1) throw std::invalid_argument("lower_shift: d must be >= 1");
  FockVector out(state.cutoff());
  for (int k = 0; k + d <= state.cutoff(); ++k) {
    out[static_cast<std::size_t>(k)] =
        state[static_cast<std::size_t>(k + d)];
  }
  return out;
}

/// (E^dagger)^d: amplitude k + d of the result is amplitude k of the input.
/// Throws TruncationOverflowError if a nonzero amplitude would leave the
/// truncated space.
inline FockVector raise_shift(const FockVector& state, int d) {
  if (d < 1) throw std::invalid_argument("raise_shift: d must be >= 1");
  const int top = state.top_index();
  if (top >= 0 && top + d > state.cutoff()) {
    throw TruncationOverflowError("raise_shift: amplitude at " +
                                  std::to_string(top) + " shifted by " +
                                  std::to_string(d) + " exceeds cutoff " +
                                  std::to_string(state.cutoff()));
  }
  FockVector out(state.cutoff());
  for (int k = 0; k + d <= state.cutoff(); ++k) {
    out[static_cast<std::size_t>(k + d)] = state[static_cast<std::size_t>(k)];
  }
  return out;
}

/// Returns the unit vector along `state` and the original squared norm.
inline std::pair<FockVector, double> normalize(
    const FockVector& state, double zero_threshold = kZeroNormThreshold) {
  const double n2 = state.norm_squared();
  if (!(n2 > zero_threshold)) {
    throw ZeroStateError("normalize: squared norm " + std::to_string(n2) +
                         " is below " + std::to_string(zero_threshold));
  }
  return {state.scaled(1.0 / std::sqrt(n2)), n2};
}

}  // namespace condtel
