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

#include <optional>
#include <string>
#include <vector>

#include "scopeguard/types.hpp"

namespace scopeguard {

// Rows of numeric feature vectors with a class label, an optional model
// prediction, and (for synthetic streams) an optional ground-truth scope
// flag. The universal input of the pipeline. Immutable by convention once
// built.
struct Dataset {
  Matrix features;  // rows = samples, cols = features
  std::vector<std::string> feature_names;
  std::vector<int> labels;
  std::optional<std::vector<int>> predictions;
  std::optional<std::vector<bool>> in_scope;  // ground truth, synth streams only

  Index rows() const { return features.rows(); }
  Index cols() const { return features.cols(); }

  /// Throws InvalidValueError / SchemaMismatchError when an invariant is
  /// violated: finite features, non-negative labels, aligned column lengths.
  void validate() const;

  /// Sorted distinct labels.
  std::vector<int> class_ids() const;

  /// Row indices carrying `label`, in original order.
  std::vector<Index> rows_with_label(int label) const;

  /// Row indices carrying predicted class `label` (requires predictions).
  std::vector<Index> rows_with_prediction(int label) const;

  /// Column restricted to a row subset.
  Vector column_at(const std::vector<Index>& row_idx, Index col) const;

  /// Row subset as a new dataset (labels/predictions/scope carried along).
  Dataset select_rows(const std::vector<Index>& row_idx) const;
};

/// Builds a validated dataset; feature names default to f0..f{d-1}.
Dataset make_dataset(Matrix features, std::vector<int> labels,
                     std::optional<std::vector<int>> predictions = std::nullopt,
                     std::vector<std::string> feature_names = {});

/// Row-wise concatenation; feature arity and names must agree.
Dataset concat_rows(const Dataset& a, const Dataset& b);

}  // namespace scopeguard
