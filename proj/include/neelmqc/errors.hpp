// Copyright 2026 The neelmqc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace neelmqc {

// Invalid argument to a library call (bad site, non-positive length, ...).
struct ArgumentError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// The chain configuration cannot support the requested operation.
struct ConfigurationError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Problem size exceeds what the dense code paths are allowed to allocate.
struct ResourceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Iterative numerics failed (eigensolver non-convergence, unstable step).
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Integration step too coarse: the norm drifted beyond the allowed bound.
struct StepSizeError : NumericalError {
    using NumericalError::NumericalError;
};

// A fit could not produce a meaningful estimate.
struct FitQualityError : NumericalError {
    using NumericalError::NumericalError;
};

}  // namespace neelmqc
