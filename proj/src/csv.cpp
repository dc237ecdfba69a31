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
#include "scopeguard/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>
#include <vector>

#include "scopeguard/error.hpp"

namespace scopeguard {

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  for (char ch : line) {
    if (ch == ',') {
      fields.push_back(field);
      field.clear();
    } else if (ch != '\r') {
      field += ch;
    }
  }
  fields.push_back(field);
  return fields;
}

[[noreturn]] void fail(const std::string& source, std::size_t line_no,
                       const std::string& what) {
  throw CsvError(source + ":" + std::to_string(line_no) + ": " + what);
}

double parse_double(const std::string& field, const std::string& source,
                    std::size_t line_no, const std::string& column) {
  double value = 0.0;
  const char* first = field.data();
  const char* last = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last)
    fail(source, line_no, "cannot parse '" + field + "' in column '" + column +
                              "' as a number");
  if (!std::isfinite(value))
    fail(source, line_no, "non-finite value in column '" + column + "'");
  return value;
}

int parse_class_id(const std::string& field, const std::string& source,
                   std::size_t line_no, const std::string& column) {
  int value = 0;
  const char* first = field.data();
  const char* last = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last || value < 0)
    fail(source, line_no, "cannot parse '" + field + "' in column '" + column +
                              "' as a non-negative class id");
  return value;
}

}  // namespace

Dataset read_dataset_csv(std::istream& in, const std::string& source_name,
                         bool require_label) {
  std::string line;
  if (!std::getline(in, line)) fail(source_name, 1, "missing header row");
  const auto header = split_line(line);

  std::ptrdiff_t label_col = -1, prediction_col = -1, scope_col = -1;
  std::vector<std::ptrdiff_t> feature_cols;
  std::vector<std::string> feature_names;
  for (std::size_t c = 0; c < header.size(); ++c) {
    const std::string& name = header[c];
    if (name == "label")
      label_col = static_cast<std::ptrdiff_t>(c);
    else if (name == "prediction")
      prediction_col = static_cast<std::ptrdiff_t>(c);
    else if (name == "scope")
      scope_col = static_cast<std::ptrdiff_t>(c);
    else {
      feature_cols.push_back(static_cast<std::ptrdiff_t>(c));
      feature_names.push_back(name);
    }
  }
  if (require_label && label_col < 0)
    fail(source_name, 1, "required column 'label' is missing");
  if (feature_cols.empty()) fail(source_name, 1, "no feature columns found");

  std::vector<double> values;
  std::vector<int> labels;
  std::vector<int> predictions;
  std::vector<bool> scope;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto fields = split_line(line);
    if (fields.size() != header.size())
      fail(source_name, line_no,
           "expected " + std::to_string(header.size()) + " fields, found " +
               std::to_string(fields.size()));
    for (std::size_t j = 0; j < feature_cols.size(); ++j)
      values.push_back(parse_double(fields[static_cast<std::size_t>(feature_cols[j])],
                                    source_name, line_no, feature_names[j]));
    if (label_col >= 0)
      labels.push_back(parse_class_id(fields[static_cast<std::size_t>(label_col)],
                                      source_name, line_no, "label"));
    if (prediction_col >= 0)
      predictions.push_back(
          parse_class_id(fields[static_cast<std::size_t>(prediction_col)],
                         source_name, line_no, "prediction"));
    if (scope_col >= 0) {
      const std::string& s = fields[static_cast<std::size_t>(scope_col)];
      if (s != "in" && s != "out")
        fail(source_name, line_no, "scope must be 'in' or 'out', found '" + s + "'");
      scope.push_back(s == "in");
    }
  }

  const auto rows = static_cast<Index>(values.size() / feature_cols.size());
  Dataset dataset;
  dataset.features =
      Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                     Eigen::RowMajor>>(
          values.data(), rows, static_cast<Index>(feature_cols.size()));
  dataset.feature_names = std::move(feature_names);
  if (label_col >= 0)
    dataset.labels = std::move(labels);
  else
    dataset.labels.assign(static_cast<std::size_t>(rows), 0);
  if (prediction_col >= 0) dataset.predictions = std::move(predictions);
  if (scope_col >= 0) dataset.in_scope = std::move(scope);
  dataset.validate();
  return dataset;
}

Dataset read_dataset_csv(const std::filesystem::path& path, bool require_label) {
  std::ifstream in(path);
  if (!in) throw CsvError("cannot open '" + path.string() + "' for reading");
  return read_dataset_csv(in, path.string(), require_label);
}

std::string format_double(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

void write_dataset_csv(std::ostream& out, const Dataset& dataset) {
  dataset.validate();
  for (Index j = 0; j < dataset.cols(); ++j) {
    if (j) out << ',';
    out << dataset.feature_names[static_cast<std::size_t>(j)];
  }
  out << ",label";
  if (dataset.predictions) out << ",prediction";
  if (dataset.in_scope) out << ",scope";
  out << '\n';
  for (Index i = 0; i < dataset.rows(); ++i) {
    for (Index j = 0; j < dataset.cols(); ++j) {
      if (j) out << ',';
      out << format_double(dataset.features(i, j));
    }
    out << ',' << dataset.labels[static_cast<std::size_t>(i)];
    if (dataset.predictions)
      out << ',' << (*dataset.predictions)[static_cast<std::size_t>(i)];
    if (dataset.in_scope)
      out << ',' << ((*dataset.in_scope)[static_cast<std::size_t>(i)] ? "in" : "out");
    out << '\n';
  }
}

void write_dataset_csv(const std::filesystem::path& path, const Dataset& dataset) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw CsvError("cannot open '" + path.string() + "' for writing");
  write_dataset_csv(out, dataset);
}

}  // namespace scopeguard
