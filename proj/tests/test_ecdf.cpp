#include <doctest.h>

#include <cmath>

#include "scopeguard/ecdf.hpp"
#include "scopeguard/error.hpp"
#include "scopeguard/rng.hpp"

using namespace scopeguard;

namespace {

Vector vec(std::initializer_list<double> values) {
  Vector v(static_cast<Index>(values.size()));
  Index i = 0;
  for (double x : values) v[i++] = x;
  return v;
}

Dataset small_training_set() {
  Matrix features(9, 2);
  features << 0.0, 1.0, 0.1, 1.1, 0.2, 1.2,  //
      5.0, 6.0, 5.1, 6.1, 5.2, 6.2,          //
      9.0, 2.0, 9.1, 2.1, 9.2, 2.2;
  std::vector<int> labels{0, 0, 0, 1, 1, 1, 2, 2, 2};
  return make_dataset(features, labels);
}

}  // namespace

TEST_CASE("ecdf evaluation follows the <= convention") {
  const Ecdf e = build_ecdf(vec({1, 2, 3}));
  CHECK(ecdf_eval(e, 2.0) == doctest::Approx(2.0 / 3.0));
  CHECK(ecdf_eval(e, 0.5) == 0.0);
  CHECK(ecdf_eval(e, 3.0) == 1.0);
  CHECK(ecdf_eval(e, 100.0) == 1.0);

  CHECK(ecdf_eval(build_ecdf(vec({5})), 5.0) == 1.0);
  CHECK(ecdf_eval(build_ecdf(vec({1, 1, 2})), 1.0) == doctest::Approx(2.0 / 3.0));
  CHECK(ecdf_eval(build_ecdf(vec({0, 10})), 4.0) == 0.5);
}

TEST_CASE("ecdf rejects bad input") {
  CHECK_THROWS_AS(build_ecdf(Vector{}), EmptySampleError);
  CHECK_THROWS_AS(build_ecdf(vec({1.0, std::nan("")})), InvalidValueError);
  const Ecdf e = build_ecdf(vec({1, 2}));
  CHECK_THROWS_AS(e(std::numeric_limits<double>::infinity()), InvalidValueError);
}

TEST_CASE("ecdf is a non-decreasing step function bounded by [0, 1]") {
  Rng rng(11);
  Vector sample(40);
  for (Index i = 0; i < sample.size(); ++i) sample[i] = rng.normal();
  const Ecdf e = build_ecdf(sample);
  double prev = 0.0;
  for (double x = -4.0; x <= 4.0; x += 0.05) {
    const double value = e(x);
    CHECK(value >= prev);
    CHECK(value >= 0.0);
    CHECK(value <= 1.0);
    prev = value;
  }
  CHECK(e(e.max()) == 1.0);
}

TEST_CASE("ecdf commutes with strictly increasing transforms") {
  Rng rng(12);
  Vector sample(30);
  for (Index i = 0; i < sample.size(); ++i) sample[i] = rng.normal();
  const auto g = [](double t) { return t * t * t + 2.0 * t; };
  Vector mapped = sample.unaryExpr(g);
  const Ecdf original = build_ecdf(sample);
  const Ecdf transformed = build_ecdf(mapped);
  for (double x : {-1.5, -0.3, 0.0, 0.4, 2.1})
    CHECK(original(x) == transformed(g(x)));
}

TEST_CASE("build_tss produces one cell per class and feature") {
  const Dataset train = small_training_set();
  const TrainingScopeSet tss = build_tss(train, 100, 42);
  CHECK(tss.n_classes() == 3);
  CHECK(tss.n_features() == 2);
  // 3 classes x 2 features = 6 cells, saturated at class size 3
  for (int label : {0, 1, 2}) {
    REQUIRE(tss.has_class(label));
    for (Index j = 0; j < 2; ++j) CHECK(tss.cell(label, j).size() == 3);
  }
}

TEST_CASE("build_tss saturated sub-sample contains the whole class") {
  const Dataset train = small_training_set();
  const TrainingScopeSet tss = build_tss(train, 50, 1);
  const Vector cell = tss.cell(0, 0).sorted_values();
  REQUIRE(cell.size() == 3);
  CHECK(cell[0] == 0.0);
  CHECK(cell[1] == 0.1);
  CHECK(cell[2] == 0.2);
}

TEST_CASE("build_tss is deterministic under a fixed seed") {
  Rng rng(5);
  Matrix features(60, 3);
  std::vector<int> labels;
  for (Index i = 0; i < 60; ++i) {
    labels.push_back(static_cast<int>(i % 2));
    for (Index j = 0; j < 3; ++j) features(i, j) = rng.normal();
  }
  const Dataset train = make_dataset(features, labels);
  const TrainingScopeSet a = build_tss(train, 10, 99);
  const TrainingScopeSet b = build_tss(train, 10, 99);
  const TrainingScopeSet c = build_tss(train, 10, 100);
  bool identical = true, differs_from_c = false;
  for (int label : {0, 1}) {
    for (Index j = 0; j < 3; ++j) {
      identical = identical &&
                  a.cell(label, j).sorted_values() == b.cell(label, j).sorted_values();
      differs_from_c = differs_from_c ||
                       a.cell(label, j).sorted_values() != c.cell(label, j).sorted_values();
    }
  }
  CHECK(identical);
  CHECK(differs_from_c);  // different seed, different sub-sample
  CHECK(a.cell(0, 0).size() == 10);
}

TEST_CASE("build_tss validates configuration") {
  const Dataset train = small_training_set();
  CHECK_THROWS_AS(build_tss(train, 1, 0), InvalidConfigError);
}
