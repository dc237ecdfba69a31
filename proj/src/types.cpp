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
#include "scopeguard/types.hpp"

#include <string>

#include "scopeguard/error.hpp"

namespace scopeguard {

DistanceMeasure measure_from_name(std::string_view name) {
  for (DistanceMeasure m : kAllMeasures)
    if (name == measure_name(m)) return m;
  throw InvalidValueError("unknown distance measure '" + std::string(name) +
                          "' (expected ks, cvm, ad or ws)");
}

Aggregation aggregation_from_name(std::string_view name) {
  if (name == "mean") return Aggregation::Mean;
  if (name == "max") return Aggregation::Max;
  throw InvalidValueError("unknown aggregation '" + std::string(name) +
                          "' (expected mean or max)");
}

}  // namespace scopeguard
