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

#include <filesystem>
#include <iosfwd>
#include <string>

#include "scopeguard/dataset.hpp"

namespace scopeguard {

// Dataset CSV: one header row; reserved column names `label` (class id),
// `prediction` (predicted class id) and `scope` (`in`/`out`); every other
// column is a feature, kept in file order. UTF-8, '.' decimal separator.
// Parse failures throw CsvError naming the line and column.

Dataset read_dataset_csv(std::istream& in, const std::string& source_name,
                         bool require_label = true);
Dataset read_dataset_csv(const std::filesystem::path& path,
                         bool require_label = true);

void write_dataset_csv(std::ostream& out, const Dataset& dataset);
void write_dataset_csv(const std::filesystem::path& path, const Dataset& dataset);

/// Shortest round-trip decimal rendering of a double (deterministic bytes).
std::string format_double(double value);

}  // namespace scopeguard
