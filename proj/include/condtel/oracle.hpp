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

// Independent reference for the squeeze matrix elements: the matrix
// exponential of the truncated two-mode generator.

#pragma once

#include <cmath>
#include <complex>
#include <map>
#include <memory>
#include <mutex>
#include <string>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "condtel/errors.hpp"
#include "condtel/squeeze.hpp"

namespace condtel {

/// Largest per-mode cutoff accepted by oracle_expm.
inline constexpr int kMaxOracleCutoff = 1000;
/// Largest two-mode dimension for which dense() materializes the full matrix.
inline constexpr long kMaxDenseOracleDimension = 2500;

/// exp(conj(alpha) a b - alpha a^dag b^dag) on span{|n, n'> : n, n' <= cutoff}.
///
/// The truncated generator couples |n, n'> only to |n +- 1, n' +- 1>, so it
/// is block diagonal in the difference delta = n - n'. Each block is
/// exponentiated on first use (Pade scaling and squaring) and kept.
/// Truncation makes elements near the cutoff differ from the untruncated
/// operator; the truncated exponential itself is unitary.
class TwoModeUnitary {
 public:
  TwoModeUnitary(const SqueezeParams& params, int cutoff)
      : params_(params), cutoff_(cutoff), state_(std::make_shared<State>()) {
    if (cutoff < 0) throw std::invalid_argument("oracle_expm: cutoff < 0");
    if (cutoff > kMaxOracleCutoff) {
      throw DimensionTooLargeError("oracle_expm: cutoff " +
                                   std::to_string(cutoff) + " exceeds " +
                                   std::to_string(kMaxOracleCutoff));
    }
  }

  int cutoff() const { return cutoff_; }
  const SqueezeParams& params() const { return params_; }

  /// <m, m'| U |n, n'>; zero outside the truncated space.
  Complex operator()(int m, int m_prime, int n, int n_prime) const {
    for (int v : {m, m_prime, n, n_prime}) {
      if (v < 0 || v > cutoff_) return {};
    }
    const int delta = n - n_prime;
    if (m - m_prime != delta) return {};
    const auto& b = block(delta);
    return b(position(m, m_prime), position(n, n_prime));
  }

  /// Sum over outputs of |<m, m'|U|n, n'>|^2.
  double column_norm_squared(int n, int n_prime) const {
    if (n < 0 || n_prime < 0 || n > cutoff_ || n_prime > cutoff_) return 0.0;
    return block(n - n_prime).col(position(n, n_prime)).squaredNorm();
  }

  /// Dense (cutoff+1)^2 square matrix in the basis index n * (cutoff+1) + n'.
  Eigen::MatrixXcd dense() const {
    const long dim = static_cast<long>(cutoff_ + 1) * (cutoff_ + 1);
    if (dim > kMaxDenseOracleDimension) {
      throw DimensionTooLargeError("oracle_expm: dense dimension " +
                                   std::to_string(dim) + " exceeds " +
                                   std::to_string(kMaxDenseOracleDimension));
    }
    Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(dim, dim);
    const int side = cutoff_ + 1;
    for (int n = 0; n <= cutoff_; ++n) {
      for (int np = 0; np <= cutoff_; ++np) {
        for (int m = 0; m <= cutoff_; ++m) {
          const int mp = m - (n - np);
          if (mp < 0 || mp > cutoff_) continue;
          u(m * side + mp, n * side + np) = (*this)(m, mp, n, np);
        }
      }
    }
    return u;
  }

 private:
  struct State {
    std::mutex mutex;
    std::map<int, Eigen::MatrixXcd> blocks;
  };

  // Position of |n, n'> inside its difference block.
  static int position(int n, int n_prime) { return std::min(n, n_prime); }

  const Eigen::MatrixXcd& block(int delta) const {
    std::lock_guard lock(state_->mutex);
    auto it = state_->blocks.find(delta);
    if (it != state_->blocks.end()) return it->second;
    return state_->blocks.emplace(delta, build_block(delta)).first->second;
  }

  Eigen::MatrixXcd build_block(int delta) const {
    const int shift_k = std::max(delta, 0);
    const int shift_l = std::max(-delta, 0);
    const int size = cutoff_ + 1 - std::abs(delta);
    const Complex alpha = params_.value();
    Eigen::MatrixXcd g = Eigen::MatrixXcd::Zero(size, size);
    for (int i = 0; i + 1 < size; ++i) {
      // |i + shift_k, i + shift_l>  <->  |i + 1 + shift_k, i + 1 + shift_l>
      const double amp = std::sqrt(static_cast<double>(i + 1 + shift_k) *
                                   static_cast<double>(i + 1 + shift_l));
      g(i, i + 1) = std::conj(alpha) * amp;  // a b
      g(i + 1, i) = -alpha * amp;            // -a^dag b^dag
    }
    return g.exp();
  }

  SqueezeParams params_;
  int cutoff_;
  std::shared_ptr<State> state_;
};

inline TwoModeUnitary oracle_expm(const SqueezeParams& params, int cutoff) {
  return TwoModeUnitary(params, cutoff);
}

}  // namespace condtel
