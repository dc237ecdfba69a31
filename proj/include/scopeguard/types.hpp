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

#include <Eigen/Core>

#include <array>
#include <cstdint>
#include <string_view>

namespace scopeguard {

template <class Scalar>
using mat_t = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <class Scalar>
using vec_t = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using Matrix = mat_t<double>;
using Vector = vec_t<double>;
using Index = Eigen::Index;

/// The four ECDF-based two-sample statistics.
enum class DistanceMeasure : std::uint8_t { KS = 0, CVM = 1, AD = 2, WS = 3 };

inline constexpr std::array<DistanceMeasure, 4> kAllMeasures{
    DistanceMeasure::KS, DistanceMeasure::CVM, DistanceMeasure::AD,
    DistanceMeasure::WS};

constexpr std::size_t measure_index(DistanceMeasure m) {
  return static_cast<std::size_t>(m);
}

constexpr std::string_view measure_name(DistanceMeasure m) {
  switch (m) {
    case DistanceMeasure::KS: return "ks";
    case DistanceMeasure::CVM: return "cvm";
    case DistanceMeasure::AD: return "ad";
    case DistanceMeasure::WS: return "ws";
  }
  return "?";
}

DistanceMeasure measure_from_name(std::string_view name);

/// How per-feature distances reduce to one value per class.
enum class Aggregation : std::uint8_t { Mean, Max };

constexpr std::string_view aggregation_name(Aggregation a) {
  return a == Aggregation::Mean ? "mean" : "max";
}

Aggregation aggregation_from_name(std::string_view name);

}  // namespace scopeguard
