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

#include <vector>

#include "scopeguard/dataset.hpp"
#include "scopeguard/types.hpp"

namespace scopeguard {

// Brute-force k-nearest-neighbors classifier (Euclidean metric). A lazy
// learner: fit stores the data verbatim, each prediction is O(n * d). Tie
// rules are fixed so the whole pipeline reproduces bit for bit: equal
// distances break toward the lower training row index, equal votes toward
// the smaller class id.
struct KnnModel {
  Matrix features;
  std::vector<int> labels;
  int k = 5;
};

KnnModel knn_fit(const Dataset& train, int k = 5);

int knn_predict(const KnnModel& model, Eigen::Ref<const Vector> query);

/// Row-wise prediction over a feature matrix.
std::vector<int> knn_predict_all(const KnnModel& model, const Matrix& queries);

/// Copy of `data` with predictions attached.
Dataset with_knn_predictions(const KnnModel& model, const Dataset& data);

}  // namespace scopeguard
