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
#include <vector>

#include "condtel/errors.hpp"
#include "condtel/oracle.hpp"
#include "condtel/teleport.hpp"

namespace condtel {
namespace {

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);
const Complex kI{0.0, 1.0};

FockVector test_state(int cutoff = 60) {
  return make_state({0.0, kInvSqrt2, 0.0, kI * kInvSqrt2}, cutoff);
}

// <n, n'| on modes 0, 1 of U_beta(0,1) U_alpha(1,2) |psi, 0, 0>, by explicit
// sums over every intermediate index of the truncated oracles.
std::vector<Complex> brute_force(const FockVector& psi, const TwoModeUnitary& ua,
                                 const TwoModeUnitary& ub, int n, int np) {
  const int cut = ua.cutoff();
  std::vector<Complex> out(static_cast<std::size_t>(cut) + 1);
  for (int m = 0; m <= cut; ++m) {
    Complex acc;
    for (int j = 0; j <= cut; ++j) {
      const Complex a = ua(j, m, 0, 0);
      if (a == Complex{}) continue;
      for (int k = 0; k <= std::min(cut, psi.cutoff()); ++k) {
        acc += ub(n, np, k, j) * a * psi[static_cast<std::size_t>(k)];
      }
    }
    out[static_cast<std::size_t>(m)] = acc;
  }
  return out;
}

TEST(MeasurementOutcome, DifferenceAndValidation) {
  EXPECT_EQ(MeasurementOutcome(3, 1).d(), -2);
  EXPECT_EQ(MeasurementOutcome(0, 4).d(), 4);
  EXPECT_THROW(MeasurementOutcome(-1, 0), std::invalid_argument);
  EXPECT_THROW(MeasurementOutcome(0, -1), std::invalid_argument);
}

TEST(ConditionalState, FockInputShiftsByDifference) {
  const SqueezeParams a(1.5, 0.4);
  const SqueezeParams b(1.1, 2.0);
  for (int k = 0; k <= 5; ++k) {
    const auto psi = FockVector::basis(k, 40);
    for (int n = 0; n <= 8; ++n) {
      for (int np = 0; np <= 8; ++np) {
        const MeasurementOutcome o(n, np);
        const int target = k + o.d();
        if (target < 0) {
          EXPECT_THROW(conditional_state(psi, a, b, o), ImpossibleOutcomeError);
          continue;
        }
        const auto cs = conditional_state(psi, a, b, o);
        EXPECT_NEAR(std::abs(cs.state[static_cast<std::size_t>(target)]), 1.0, 1e-12);
        EXPECT_NEAR(cs.state.norm_squared(), 1.0, 1e-12);
      }
    }
  }
}

TEST(ConditionalState, ImpossibleOutcomeOfTestState) {
  const SqueezeParams p(1.5);
  for (auto [n, np] : {std::pair{6, 2}, {4, 0}, {9, 1}}) {
    EXPECT_THROW(conditional_state(test_state(), p, p, MeasurementOutcome(n, np)),
                 ImpossibleOutcomeError);
    const auto e = evaluate_event(test_state(), p, p, MeasurementOutcome(n, np));
    EXPECT_EQ(e.probability, 0.0);
    EXPECT_EQ(e.fidelity, 0.0);
  }
  // n = n' + 3 still occurs, through the |3> component alone
  const auto e = evaluate_event(test_state(), p, p, MeasurementOutcome(5, 2));
  EXPECT_GT(e.probability, 0.0);
  EXPECT_NEAR(e.fidelity, 0.5, 1e-12);
}

TEST(ConditionalState, VacuumOutcomeProbability) {
  const SqueezeParams p(1.5);
  const auto cs =
      conditional_state(FockVector::basis(0, 40), p, p, MeasurementOutcome(0, 0));
  const double sech = 1.0 / std::cosh(1.5);
  EXPECT_NEAR(cs.probability, std::pow(sech, 4), 1e-15);
  const auto ua = oracle_expm(p, 40);
  const auto ref = brute_force(FockVector::basis(0, 40), ua, ua, 0, 0);
  double p_ref = 0.0;
  for (const auto& v : ref) p_ref += std::norm(v);
  EXPECT_NEAR(cs.probability, p_ref, 1e-12);
}

TEST(ConditionalState, AgreesWithBruteForceProjection) {
  const int cut = 40;
  const SqueezeParams a(0.5, 0.3);
  const SqueezeParams b(0.4, 1.7);
  const auto ua = oracle_expm(a, cut);
  const auto ub = oracle_expm(b, cut);
  const auto psi = normalize(make_state({0.3, Complex(0.5, 0.2), 0.0,
                                         Complex(-0.1, 0.6), 0.25},
                                        cut))
                       .first;
  for (int n = 0; n <= 6; ++n) {
    for (int np = 0; np <= 6; ++np) {
      const auto ref = brute_force(psi, ua, ub, n, np);
      double p_ref = 0.0;
      for (const auto& v : ref) p_ref += std::norm(v);
      const MeasurementOutcome o(n, np);
      if (p_ref <= kImpossibleOutcomeThreshold) {
        EXPECT_THROW(conditional_state(psi, a, b, o), ImpossibleOutcomeError);
        continue;
      }
      const auto cs = conditional_state(psi, a, b, o);
      EXPECT_NEAR(cs.probability, p_ref, 1e-12);
      const double sp = std::sqrt(cs.probability);
      for (int m = 0; m <= cut; ++m) {
        EXPECT_NEAR(std::abs(sp * cs.state.at(m) - ref[static_cast<std::size_t>(m)]),
                    0.0, 1e-9)
            << "n=" << n << " n'=" << np << " m=" << m;
      }
    }
  }
}

TEST(ConditionalState, PhasesFollowShiftedInput) {
  const SqueezeParams p(1.5);
  const auto psi = normalize(make_state({Complex(0.2, 0.1), Complex(0.3, -0.5),
                                         Complex(0.0, 0.4), Complex(-0.6, 0.2)},
                                        60))
                       .first;
  for (int n = 0; n <= 10; ++n) {
    for (int np = 0; np <= 10; ++np) {
      const MeasurementOutcome o(n, np);
      if (evaluate_event(psi, p, p, o).probability == 0.0) continue;
      const auto cs = conditional_state(psi, p, p, o);
      for (int m = 0; m <= cs.state.cutoff(); ++m) {
        const Complex in = psi.at(m - o.d());
        const Complex out = cs.state[static_cast<std::size_t>(m)];
        if (in == Complex{} || out == Complex{}) continue;
        const Complex ratio = out / in;
        EXPECT_LT(std::abs(ratio.imag()), 1e-10 * std::abs(ratio));
      }
    }
  }
}

TEST(TeleportEvent, FockStatesAreTeleportedPerfectly) {
  const SqueezeParams p(1.5);
  const auto psi = FockVector::basis(3, 60);
  for (int n = 0; n <= 12; ++n) {
    for (int np = 0; np <= 12; ++np) {
      const MeasurementOutcome o(n, np);
      if (evaluate_event(psi, p, p, o).probability <= kImpossibleOutcomeThreshold) continue;
      EXPECT_NEAR(teleport_event(psi, p, p, o).fidelity, 1.0, 1e-12);
    }
  }
}

TEST(TeleportEvent, HalfFidelityDiagonals) {
  const SqueezeParams p(1.5);
  const auto psi = test_state();
  const auto r = teleport_event(psi, p, p, MeasurementOutcome(3, 1));
  EXPECT_NEAR(r.fidelity, 0.5, 1e-9);
  for (int np = 0; np <= 10; ++np) {
    EXPECT_NEAR(teleport_event(psi, p, p, MeasurementOutcome(np + 2, np)).fidelity,
                0.5, 1e-12);
    EXPECT_NEAR(teleport_event(psi, p, p, MeasurementOutcome(np + 3, np)).fidelity,
                0.5, 1e-12);
  }
}

TEST(TeleportEvent, ZeroDifferenceAppliesNoShift) {
  const SqueezeParams p(1.5);
  const auto r = teleport_event(test_state(), p, p, MeasurementOutcome(4, 4));
  EXPECT_EQ(r.psi_tel, r.psi_out);
}

TEST(TeleportEvent, RaiseShiftLosesNoNorm) {
  // input supported on photon numbers >= |d|, d < 0
  const SqueezeParams a(1.2);
  const SqueezeParams b(0.8, 0.5);
  const auto psi = normalize(make_state({0.0, 0.0, 0.6, Complex(0.0, 0.5), 0.3}, 40)).first;
  for (int n = 2; n <= 8; ++n) {
    const MeasurementOutcome o(n, n - 2);
    const auto cs = conditional_state(psi, a, b, o);
    EXPECT_NEAR(raise_shift(cs.state, 2).norm_squared(), 1.0, 1e-12);
  }
}

TEST(TeleportEvent, ValuesInUnitInterval) {
  const SqueezeParams a(1.5, 0.2);
  const SqueezeParams b(2.0, 1.0);
  const auto psi = test_state();
  for (int n = 0; n <= 15; ++n) {
    for (int np = 0; np <= 15; ++np) {
      const auto e = evaluate_event(psi, a, b, MeasurementOutcome(n, np));
      EXPECT_GE(e.probability, 0.0);
      EXPECT_LE(e.probability, 1.0);
      EXPECT_GE(e.fidelity, 0.0);
      EXPECT_LE(e.fidelity, 1.0);
      if (e.probability > kImpossibleOutcomeThreshold) {
        const auto t = teleport_event(psi, a, b, MeasurementOutcome(n, np));
        EXPECT_NEAR(t.fidelity, e.fidelity, 1e-12);
        EXPECT_NEAR(t.probability, e.probability, 1e-15);
      }
    }
  }
}

// Summed over every outcome with a fixed difference d, the probability is
// the weight of the resource component |k+d, k+d> paired with |k>:
//   sum_k |psi_k|^2 sech^2|alpha| tanh^{2(k+d)}|alpha|.
TEST(TeleportEvent, PerDifferenceCompleteness) {
  const SqueezeParams a(1.5);
  const SqueezeParams b(1.5, 0.6);
  const auto psi = test_state(4);
  const double t = std::tanh(1.5);
  const double sech2 = 1.0 / std::pow(std::cosh(1.5), 2);
  double all = 0.0;
  for (int d = -3; d <= 40; ++d) {
    CompensatedSum<double> s;
    for (int n = std::max(0, -d); n <= 2500; ++n) {
      s.add(evaluate_event(psi, a, b, MeasurementOutcome(n, n + d)).probability);
    }
    double expect = 0.0;
    for (int k : {1, 3}) {
      if (k + d >= 0) expect += 0.5 * sech2 * std::pow(t, 2 * (k + d));
    }
    EXPECT_NEAR(s.value(), expect, 1e-10) << "d=" << d;
    all += s.value();
  }
  EXPECT_NEAR(all, 1.0 - 0.5 * (std::pow(t, 84) + std::pow(t, 88)), 1e-9);
}

TEST(TeleportEvent, CompletenessAtModerateSqueezing) {
  const SqueezeParams p(0.5);
  const auto psi = test_state();
  CompensatedSum<double> s;
  for (int n = 0; n <= 60; ++n) {
    for (int np = 0; np <= 60; ++np) {
      s.add(evaluate_event(psi, p, p, MeasurementOutcome(n, np)).probability);
    }
  }
  EXPECT_GE(s.value(), 0.999);
  EXPECT_LE(s.value(), 1.0 + 1e-9);
}

}  // namespace
}  // namespace condtel
