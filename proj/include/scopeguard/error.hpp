/*
 * Copyright 2026 The scopeguard authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#pragma once

#include <stdexcept>
#include <string>

namespace scopeguard {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Input / configuration errors.
struct EmptySampleError : Error { using Error::Error; };
struct InvalidValueError : Error { using Error::Error; };
struct InvalidConfigError : Error { using Error::Error; };
struct EmptyClassError : Error { using Error::Error; };
struct SchemaMismatchError : Error { using Error::Error; };
struct CsvError : Error { using Error::Error; };

// Statistical infeasibility: the data cannot support the requested step.
struct EffectTooSmallError : Error { using Error::Error; };
struct DegenerateVarianceError : Error { using Error::Error; };
struct NoUsableEffectError : Error { using Error::Error; };
struct NoIncorrectSamplesError : Error { using Error::Error; };
struct MissingPredictionsError : Error { using Error::Error; };
struct NoFeasibleThresholdError : Error { using Error::Error; };

// Runtime-monitor contract violations.
struct UnknownClassError : Error { using Error::Error; };
struct NotCalibratedError : Error { using Error::Error; };
struct AlreadyRegisteredError : Error { using Error::Error; };

}  // namespace scopeguard
