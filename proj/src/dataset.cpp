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
#include "scopeguard/dataset.hpp"

#include <algorithm>
#include <set>

#include "scopeguard/error.hpp"

namespace scopeguard {

void Dataset::validate() const {
  if (!features.allFinite())
    throw InvalidValueError("dataset contains a non-finite feature value");
  if (static_cast<Index>(labels.size()) != rows())
    throw SchemaMismatchError("label column length does not match row count");
  for (int label : labels)
    if (label < 0) throw InvalidValueError("negative class label");
  if (predictions) {
    if (static_cast<Index>(predictions->size()) != rows())
      throw SchemaMismatchError("prediction column length does not match row count");
    for (int p : *predictions)
      if (p < 0) throw InvalidValueError("negative predicted class");
  }
  if (in_scope && static_cast<Index>(in_scope->size()) != rows())
    throw SchemaMismatchError("scope column length does not match row count");
  if (!feature_names.empty() &&
      static_cast<Index>(feature_names.size()) != cols())
    throw SchemaMismatchError("feature name count does not match column count");
}

std::vector<int> Dataset::class_ids() const {
  std::set<int> distinct(labels.begin(), labels.end());
  return {distinct.begin(), distinct.end()};
}

std::vector<Index> Dataset::rows_with_label(int label) const {
  std::vector<Index> idx;
  for (Index i = 0; i < rows(); ++i)
    if (labels[static_cast<std::size_t>(i)] == label) idx.push_back(i);
  return idx;
}

std::vector<Index> Dataset::rows_with_prediction(int label) const {
  if (!predictions)
    throw MissingPredictionsError("dataset has no prediction column");
  std::vector<Index> idx;
  for (Index i = 0; i < rows(); ++i)
    if ((*predictions)[static_cast<std::size_t>(i)] == label) idx.push_back(i);
  return idx;
}

Vector Dataset::column_at(const std::vector<Index>& row_idx, Index col) const {
  Vector out(static_cast<Index>(row_idx.size()));
  for (std::size_t i = 0; i < row_idx.size(); ++i)
    out[static_cast<Index>(i)] = features(row_idx[i], col);
  return out;
}

Dataset Dataset::select_rows(const std::vector<Index>& row_idx) const {
  Dataset out;
  out.features = features(row_idx, Eigen::all);
  out.feature_names = feature_names;
  out.labels.reserve(row_idx.size());
  for (Index i : row_idx) out.labels.push_back(labels[static_cast<std::size_t>(i)]);
  if (predictions) {
    std::vector<int> p;
    p.reserve(row_idx.size());
    for (Index i : row_idx) p.push_back((*predictions)[static_cast<std::size_t>(i)]);
    out.predictions = std::move(p);
  }
  if (in_scope) {
    std::vector<bool> s;
    s.reserve(row_idx.size());
    for (Index i : row_idx) s.push_back((*in_scope)[static_cast<std::size_t>(i)]);
    out.in_scope = std::move(s);
  }
  return out;
}

Dataset make_dataset(Matrix features, std::vector<int> labels,
                     std::optional<std::vector<int>> predictions,
                     std::vector<std::string> feature_names) {
  Dataset d;
  d.features = std::move(features);
  d.labels = std::move(labels);
  d.predictions = std::move(predictions);
  if (feature_names.empty()) {
    feature_names.reserve(static_cast<std::size_t>(d.cols()));
    for (Index j = 0; j < d.cols(); ++j)
      feature_names.push_back("f" + std::to_string(j));
  }
  d.feature_names = std::move(feature_names);
  d.validate();
  return d;
}

Dataset concat_rows(const Dataset& a, const Dataset& b) {
  if (a.cols() != b.cols())
    throw SchemaMismatchError("cannot concatenate datasets of different arity");
  if (a.feature_names != b.feature_names)
    throw SchemaMismatchError("cannot concatenate datasets with different feature names");
  if (a.predictions.has_value() != b.predictions.has_value())
    throw SchemaMismatchError("cannot concatenate datasets where only one has predictions");
  Dataset out;
  out.features.resize(a.rows() + b.rows(), a.cols());
  out.features << a.features, b.features;
  out.feature_names = a.feature_names;
  out.labels = a.labels;
  out.labels.insert(out.labels.end(), b.labels.begin(), b.labels.end());
  if (a.predictions) {
    out.predictions = *a.predictions;
    out.predictions->insert(out.predictions->end(), b.predictions->begin(),
                            b.predictions->end());
  }
  if (a.in_scope && b.in_scope) {
    out.in_scope = *a.in_scope;
    out.in_scope->insert(out.in_scope->end(), b.in_scope->begin(),
                         b.in_scope->end());
  }
  out.validate();
  return out;
}

}  // namespace scopeguard
