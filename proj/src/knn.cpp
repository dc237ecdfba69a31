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
#include "scopeguard/knn.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "scopeguard/error.hpp"

namespace scopeguard {

KnnModel knn_fit(const Dataset& train, int k) {
  train.validate();
  if (train.rows() == 0) throw EmptySampleError("kNN training set is empty");
  if (k < 1 || static_cast<Index>(k) > train.rows())
    throw InvalidConfigError("k must satisfy 1 <= k <= training rows");
  return KnnModel{train.features, train.labels, k};
}

int knn_predict(const KnnModel& model, Eigen::Ref<const Vector> query) {
  if (query.size() != model.features.cols())
    throw SchemaMismatchError("query arity does not match the model");

  const Vector sq_dist =
      (model.features.rowwise() - query.transpose()).rowwise().squaredNorm();

  std::vector<Index> order(static_cast<std::size_t>(sq_dist.size()));
  std::iota(order.begin(), order.end(), Index{0});
  std::partial_sort(order.begin(), order.begin() + model.k, order.end(),
                    [&](Index a, Index b) {
                      if (sq_dist[a] != sq_dist[b]) return sq_dist[a] < sq_dist[b];
                      return a < b;  // distance tie: lower row index wins
                    });

  std::map<int, int> votes;
  for (int i = 0; i < model.k; ++i)
    ++votes[model.labels[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])]];
  int best_label = votes.begin()->first;
  int best_count = votes.begin()->second;
  for (const auto& [label, count] : votes) {
    if (count > best_count) {  // vote tie: smaller class id wins
      best_label = label;
      best_count = count;
    }
  }
  return best_label;
}

std::vector<int> knn_predict_all(const KnnModel& model, const Matrix& queries) {
  std::vector<int> out(static_cast<std::size_t>(queries.rows()));
  for (Index i = 0; i < queries.rows(); ++i)
    out[static_cast<std::size_t>(i)] = knn_predict(model, queries.row(i).transpose());
  return out;
}

Dataset with_knn_predictions(const KnnModel& model, const Dataset& data) {
  Dataset out = data;
  out.predictions = knn_predict_all(model, data.features);
  return out;
}

}  // namespace scopeguard
