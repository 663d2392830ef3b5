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

#pragma once

#include <stdexcept>
#include <string>

namespace condtel {

/// Base class for all domain errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A state vector with (numerically) zero norm was asked to be normalized.
class ZeroStateError : public Error {
 public:
  using Error::Error;
};

/// Raising the photon number would push nonzero amplitude past the cutoff.
class TruncationOverflowError : public Error {
 public:
  using Error::Error;
};

/// An operation that requires unit-norm inputs received something else.
class NormalizationError : public Error {
 public:
  using Error::Error;
};

/// Cancellation in an alternating sum could not be controlled even in the
/// widest extended-precision tier.
class PrecisionLossError : public Error {
 public:
  using Error::Error;
};

/// A photon-count outcome whose probability is below the impossible-outcome
/// threshold.
class ImpossibleOutcomeError : public Error {
 public:
  using Error::Error;
};

class DimensionTooLargeError : public Error {
 public:
  using Error::Error;
};

/// Homodyne outcome with vanishing probability density.
class ZeroDensityError : public Error {
 public:
  using Error::Error;
};

/// A cutoff-doubling check did not meet its tolerance.
class NotConvergedError : public Error {
 public:
  using Error::Error;
};

}  // namespace condtel
