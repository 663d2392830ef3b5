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

#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <random>

#include "condtel/errors.hpp"
#include "condtel/fock.hpp"

namespace condtel {
namespace {

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);
const Complex kI{0.0, 1.0};

FockVector test_state(int cutoff = 10) {
  return make_state({0.0, kInvSqrt2, 0.0, kI * kInvSqrt2}, cutoff);
}

FockVector random_state(std::mt19937& rng, int support, int cutoff) {
  std::normal_distribution<double> g;
  std::vector<Complex> a(static_cast<std::size_t>(support) + 1);
  for (auto& c : a) c = {g(rng), g(rng)};
  return normalize(make_state(std::span<const Complex>(a), cutoff)).first;
}

TEST(MakeState, PadsVacuum) {
  const auto v = make_state({1.0}, 5);
  EXPECT_EQ(v.size(), 6u);
  EXPECT_EQ(v.cutoff(), 5);
  EXPECT_EQ(v[0], Complex(1.0));
  for (std::size_t k = 1; k < 6; ++k) EXPECT_EQ(v[k], Complex{});
}

TEST(MakeState, TestStateIsNotRenormalized) {
  const auto v = test_state();
  EXPECT_EQ(v.size(), 11u);
  EXPECT_NEAR(v.norm_squared(), 1.0, 1e-15);
  EXPECT_EQ(v[3], kI * kInvSqrt2);
  const auto half = make_state({0.5}, 2);
  EXPECT_DOUBLE_EQ(half.norm_squared(), 0.25);
}

TEST(MakeState, ZeroVectorAccepted) {
  const auto z = make_state({0.0, 0.0, 0.0, 0.0}, 3);
  EXPECT_EQ(z.norm_squared(), 0.0);
  EXPECT_EQ(z.top_index(), -1);
}

TEST(MakeState, RejectsNonFiniteAndOverlong) {
  EXPECT_THROW(make_state({std::nan("")}, 2), std::invalid_argument);
  EXPECT_THROW(make_state({Complex(0.0, INFINITY)}, 2), std::invalid_argument);
  EXPECT_THROW(make_state({1.0, 0.0, 0.0}, 1), std::invalid_argument);
}

TEST(InnerProduct, Orthonormality) {
  EXPECT_EQ(inner_product(FockVector::basis(1, 4), FockVector::basis(1, 4)),
            Complex(1.0));
  EXPECT_EQ(inner_product(FockVector::basis(1, 4), FockVector::basis(2, 4)),
            Complex{});
}

TEST(InnerProduct, ConjugatesFirstArgument) {
  const auto ip = inner_product(test_state(), FockVector::basis(3, 10));
  EXPECT_NEAR(ip.real(), 0.0, 1e-16);
  EXPECT_NEAR(ip.imag(), -kInvSqrt2, 1e-16);
  EXPECT_NEAR(std::abs(ip), kInvSqrt2, 1e-16);
}

TEST(InnerProduct, PadsShorterVector) {
  const auto a = make_state({0.0, 1.0}, 1);
  const auto b = make_state({0.0, 1.0, 0.0, 0.0, 0.0}, 8);
  EXPECT_EQ(inner_product(a, b), Complex(1.0));
}

TEST(Fidelity, Examples) {
  const auto psi = test_state();
  EXPECT_NEAR(fidelity(psi, psi), 1.0, 1e-15);
  EXPECT_NEAR(fidelity(FockVector::basis(1, 10), psi), 0.5, 1e-15);
  EXPECT_EQ(fidelity(FockVector::basis(0, 3), FockVector::basis(1, 3)), 0.0);
}

TEST(Fidelity, RejectsUnnormalized) {
  EXPECT_THROW(fidelity(make_state({0.5}, 2), FockVector::basis(0, 2)),
               NormalizationError);
  EXPECT_THROW(fidelity(FockVector::basis(0, 2), make_state({1.0 + 1e-8}, 2)),
               NormalizationError);
}

TEST(Fidelity, SymmetricAndPhaseInvariant) {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const auto a = random_state(rng, 6, 8);
    const auto b = random_state(rng, 6, 8);
    const double f = fidelity(a, b);
    EXPECT_GE(f, 0.0);
    EXPECT_LE(f, 1.0);
    EXPECT_NEAR(f, fidelity(b, a), 1e-15);
    const Complex phase = std::polar(1.0, 0.37 * trial);
    EXPECT_NEAR(f, fidelity(a.scaled(phase), b), 1e-15);
    EXPECT_NEAR(f, fidelity(a, b.scaled(phase)), 1e-15);
  }
}

TEST(LowerShift, Examples) {
  EXPECT_EQ(lower_shift(FockVector::basis(3, 5), 2), FockVector::basis(1, 5));
  EXPECT_EQ(lower_shift(FockVector::basis(0, 5), 1), FockVector(5));
  const auto s = lower_shift(test_state(), 2);
  EXPECT_EQ(s[1], kI * kInvSqrt2);
  EXPECT_NEAR(s.norm_squared(), 0.5, 1e-15);
  EXPECT_THROW(lower_shift(test_state(), 0), std::invalid_argument);
}

TEST(RaiseShift, Examples) {
  EXPECT_EQ(raise_shift(FockVector::basis(1, 5), 2), FockVector::basis(3, 5));
  EXPECT_THROW(raise_shift(FockVector::basis(5, 5), 1),
               TruncationOverflowError);
  EXPECT_THROW(raise_shift(FockVector::basis(1, 5), 0), std::invalid_argument);
}

TEST(Shift, LowerIsLeftInverseOfRaise) {
  std::mt19937 rng(11);
  for (int d = 1; d <= 6; ++d) {
    for (int trial = 0; trial < 20; ++trial) {
      const auto psi = random_state(rng, 8, 20);
      EXPECT_EQ(lower_shift(raise_shift(psi, d), d), psi);
    }
  }
}

TEST(Shift, LowerShiftNormPartition) {
  std::mt19937 rng(13);
  for (int d = 1; d <= 5; ++d) {
    const auto psi = random_state(rng, 10, 12);
    double discarded = 0.0;
    for (int k = 0; k < d; ++k) discarded += std::norm(psi[static_cast<std::size_t>(k)]);
    EXPECT_NEAR(lower_shift(psi, d).norm_squared() + discarded,
                psi.norm_squared(), 1e-15);
  }
}

TEST(Normalize, Examples) {
  const auto [unit, n2] = normalize(make_state({0.0, kI * kInvSqrt2}, 3));
  EXPECT_NEAR(n2, 0.5, 1e-15);
  EXPECT_NEAR(std::abs(unit[1]), 1.0, 1e-15);
  EXPECT_NEAR(std::arg(unit[1]), M_PI / 2, 1e-15);

  const auto psi = test_state();
  const auto [same, one] = normalize(psi);
  EXPECT_NEAR(one, 1.0, 1e-15);
  for (std::size_t k = 0; k < psi.size(); ++k) {
    EXPECT_NEAR(std::abs(same[k] - psi[k]), 0.0, 1e-15);
  }
  EXPECT_THROW(normalize(FockVector(4)), ZeroStateError);
  EXPECT_THROW(normalize(make_state({1e-8}, 2)), ZeroStateError);
}

TEST(WithCutoff, PadsAndGuardsTruncation) {
  const auto psi = test_state(4);
  EXPECT_EQ(psi.with_cutoff(9).cutoff(), 9);
  EXPECT_EQ(psi.with_cutoff(3).cutoff(), 3);
  EXPECT_THROW(psi.with_cutoff(2), TruncationOverflowError);
}

}  // namespace
}  // namespace condtel
