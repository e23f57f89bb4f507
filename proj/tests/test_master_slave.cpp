#include <doctest.h>

#include <algorithm>
#include <set>

#include "semg/augment.hpp"
#include "semg/errors.hpp"
#include "semg/experiment.hpp"
#include "semg/master_slave.hpp"
#include "semg/rng.hpp"

using semg::Arch;
using semg::FeatureVector;
using semg::GestureId;
using semg::GestureType;

namespace {

// Small separable feature table: per gesture a distinct 4-dim mean plus
// noise, several subjects and repetitions.
std::vector<FeatureVector> toy_table(int subjects, int reps, std::uint64_t seed) {
  semg::rng::Stream stream(seed);
  std::vector<FeatureVector> rows;
  for (int s = 1; s <= subjects; ++s) {
    for (int g = 0; g < semg::kGestureCount; ++g) {
      for (int r = 0; r < reps; ++r) {
        FeatureVector fv;
        fv.subject_id = s;
        fv.label = semg::GestureLabel::of(static_cast<GestureId>(g));
        fv.repetition_index = r;
        const double type_shift = g < 5 ? 0.0 : 6.0;
        fv.values = {g * 2.0 + stream.normal() * 0.2,
                     type_shift + stream.normal() * 0.2,
                     (g % 5) * 1.5 + stream.normal() * 0.2,
                     100.0 + g * 10.0 + stream.normal()};
        rows.push_back(std::move(fv));
      }
    }
  }
  return rows;
}

}  // namespace

TEST_CASE("class maps are bijective and the slave sets partition the gestures") {
  std::set<int> static_set, dynamic_set;
  for (int g = 0; g < semg::kGestureCount; ++g) {
    FeatureVector fv;
    fv.label = semg::GestureLabel::of(static_cast<GestureId>(g));
    CHECK(semg::conventional_class_of(fv) == g);
    const int slave_idx = semg::slave_class_of(fv);
    CHECK(slave_idx >= 0);
    CHECK(slave_idx < 5);
    const GestureId back = semg::slave_gesture(fv.label.gesture_type, slave_idx);
    CHECK(back == fv.label.gesture_id);
    (fv.label.gesture_type == GestureType::Static ? static_set : dynamic_set)
        .insert(static_cast<int>(fv.label.gesture_id));
  }
  CHECK(static_set.size() == 5);
  CHECK(dynamic_set.size() == 5);
  std::set<int> all;
  all.insert(static_set.begin(), static_set.end());
  all.insert(dynamic_set.begin(), dynamic_set.end());
  CHECK(all.size() == 10);
}

TEST_CASE("scaler standardizes columns and survives constant columns") {
  auto rows = toy_table(1, 4, 5);
  for (auto& fv : rows) fv.values.push_back(3.0);  // constant column
  const auto scaler = semg::FeatureScaler::fit(rows);
  CHECK(scaler.stddev.back() == 1.0);
  const auto scaled = scaler.apply(rows[0].values);
  CHECK(scaled.size() == rows[0].values.size());

  double mean0 = 0.0;
  for (const auto& fv : rows) mean0 += scaler.apply(fv.values)[0];
  mean0 /= static_cast<double>(rows.size());
  CHECK(mean0 == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("master and conventional see byte-equal feature matrices") {
  const auto rows = toy_table(1, 6, 9);
  const auto scaler = semg::FeatureScaler::fit(rows);
  const auto master_matrix = semg::build_matrix(rows, scaler, 2, semg::master_class_of);
  const auto conventional_matrix =
      semg::build_matrix(rows, scaler, 10, semg::conventional_class_of);
  REQUIRE(master_matrix.inputs == conventional_matrix.inputs);
  // one-hot targets row-sum to 1
  for (std::size_t i = 0; i < master_matrix.rows; ++i) {
    double sum = 0.0;
    for (double v : master_matrix.target_row(i)) sum += v;
    CHECK(sum == 1.0);
  }
}

TEST_CASE("a zero-weight master answers Static everywhere") {
  const auto rows = toy_table(1, 4, 2);
  semg::TrainConfig config;
  config.iterations = 5;
  auto [model, reports] = semg::train_master_slave(rows, config);
  for (auto& w : model.master.weights) std::fill(w.begin(), w.end(), 0.0);

  const auto row = semg::evaluate(model, rows);
  REQUIRE(row.master_ca.has_value());
  CHECK(*row.master_ca == doctest::Approx(50.0));  // balanced set
  CHECK(row.end_to_end_ca <= *row.master_ca);
}

TEST_CASE("train_master_slave trains three networks and evaluate honors the routing identity") {
  const auto rows = toy_table(1, 8, 33);
  semg::TrainConfig config;
  config.iterations = 60;
  config.seed = 17;
  auto [model, reports] = semg::train_master_slave(rows, config, &rows);

  CHECK(model.master.output_dim() == 2);
  CHECK(model.slave_static.output_dim() == 5);
  CHECK(model.slave_dynamic.output_dim() == 5);
  CHECK(model.master.layer_sizes == semg::standard_topology(4, 2));
  CHECK(reports.master.records.size() == 60);
  CHECK(reports.master.records.back().has_test);

  const auto row = semg::evaluate(model, rows);  // identity checked inside
  REQUIRE(row.master_ca.has_value());
  REQUIRE(row.slave_ca.has_value());
  CHECK(row.end_to_end_ca <= *row.master_ca + 1e-12);

  const auto pred = semg::predict_sequential(model, rows[0].values);
  CHECK(pred.master_output.size() == 2);
  CHECK(pred.slave_output.size() == 5);
  CHECK(semg::gesture_type(pred.gesture) == pred.master_type);
}

TEST_CASE("coverage preconditions") {
  auto rows = toy_table(1, 3, 4);
  // Remove every Dynamic example.
  rows.erase(std::remove_if(rows.begin(), rows.end(),
                            [](const FeatureVector& fv) {
                              return fv.label.gesture_type == GestureType::Dynamic;
                            }),
             rows.end());
  semg::TrainConfig config;
  config.iterations = 2;
  CHECK_THROWS_AS(semg::train_master_slave(rows, config), semg::DataError);
  CHECK_THROWS_AS(semg::train_conventional(rows, config), semg::DataError);

  auto missing_one = toy_table(1, 3, 4);
  missing_one.erase(std::remove_if(missing_one.begin(), missing_one.end(),
                                   [](const FeatureVector& fv) {
                                     return fv.label.gesture_id == GestureId::Key;
                                   }),
                    missing_one.end());
  CHECK_THROWS_AS(semg::train_master_slave(missing_one, config), semg::DataError);
}

TEST_CASE("training is insensitive to row order") {
  const auto rows = toy_table(1, 5, 77);
  auto reversed = rows;
  std::reverse(reversed.begin(), reversed.end());
  semg::TrainConfig config;
  config.iterations = 10;
  config.seed = 3;
  auto [m1, r1] = semg::train_conventional(rows, config);
  auto [m2, r2] = semg::train_conventional(reversed, config);
  REQUIRE(m1.net.weights.size() == m2.net.weights.size());
  for (std::size_t z = 0; z < m1.net.weights.size(); ++z) {
    for (std::size_t i = 0; i < m1.net.weights[z].size(); ++i) {
      CHECK(m1.net.weights[z][i] ==
            doctest::Approx(m2.net.weights[z][i]).epsilon(1e-9));
    }
  }
}

TEST_CASE("stratified splits are deterministic, disjoint and cover every gesture") {
  const auto rows = toy_table(2, 10, 8);
  semg::SplitConfig config;
  config.train_fraction = 0.7;
  config.seed = 5;
  const auto splits = semg::stratified_splits(rows, config);
  REQUIRE(splits.size() == 2);
  for (const auto& split : splits) {
    CHECK(split.train_rows.size() == 70);  // 10 gestures x 7
    CHECK(split.test_rows.size() == 30);
    std::set<std::size_t> seen(split.train_rows.begin(), split.train_rows.end());
    for (std::size_t i : split.test_rows) CHECK(seen.insert(i).second);
    std::set<int> train_gestures, test_gestures;
    for (std::size_t i : split.train_rows) {
      CHECK(rows[i].subject_id == split.subject_id);
      train_gestures.insert(static_cast<int>(rows[i].label.gesture_id));
    }
    for (std::size_t i : split.test_rows) {
      test_gestures.insert(static_cast<int>(rows[i].label.gesture_id));
    }
    CHECK(train_gestures.size() == 10);
    CHECK(test_gestures.size() == 10);
  }
  const auto again = semg::stratified_splits(rows, config);
  CHECK(again[0].train_rows == splits[0].train_rows);
  semg::SplitConfig other = config;
  other.seed = 6;
  CHECK(semg::stratified_splits(rows, other)[0].train_rows != splits[0].train_rows);
}

TEST_CASE("run_experiment emits the full cell grid and keeps synthetic rows out of tests") {
  auto rows = toy_table(2, 6, 12);
  // Fake synthetic rows from two extra subjects.
  auto synthetic = toy_table(2, 4, 13);
  for (auto& fv : synthetic) {
    fv.subject_id += 100;
    fv.synthetic = true;
  }
  rows.insert(rows.end(), synthetic.begin(), synthetic.end());

  semg::ExperimentConfig config;
  config.split.seed = 4;
  config.train.iterations = 25;
  config.train.seed = 99;
  const auto result = semg::run_experiment(rows, config);

  CHECK(result.splits.size() == 2);  // real subjects only
  CHECK(result.cells.size() == 8);   // 2 subjects x 2 archs x 2 synth states
  for (const auto& cell : result.cells) {
    if (cell.arch == Arch::MasterSlave) {
      REQUIRE(cell.row.master_ca.has_value());
      CHECK(cell.row.end_to_end_ca <= *cell.row.master_ca + 1e-12);
      CHECK(cell.reports.size() == 3);
    } else {
      CHECK_FALSE(cell.row.master_ca.has_value());
      CHECK(cell.reports.size() == 1);
    }
    CHECK(cell.row.end_to_end_ca >= 0.0);
    CHECK(cell.row.end_to_end_ca <= 100.0);
  }
  for (const auto& split : result.splits) {
    for (std::size_t i : split.test_rows) CHECK_FALSE(rows[i].synthetic);
    CHECK_NOTHROW(semg::cell_test_rows(rows, split));
  }
  // with_synthetic cells trained on more rows; matched init seeds mean the
  // first-iteration costs still differ only through the data.
  const auto training_with =
      semg::cell_training_rows(rows, result.splits[0], true);
  const auto training_without =
      semg::cell_training_rows(rows, result.splits[0], false);
  CHECK(training_with.size() == training_without.size() + synthetic.size());
}

TEST_CASE("generate_subject produces on-grid rows with the right shape") {
  const auto real = toy_table(2, 5, 21);
  const auto quantizer = semg::fit_quantizer(real, 20);
  const auto series = semg::to_series(real, quantizer);
  semg::GeneratorTrainConfig config;
  config.hidden_dim = 6;
  config.epochs = 10;
  config.seed = 2;
  const auto generator =
      semg::train_generator(series, quantizer.levels, quantizer.dimension(), config);

  const auto rows = semg::generate_subject(generator, quantizer, real, 42, 20, 7);
  CHECK(rows.size() == 200);  // 10 gestures x length 20
  for (const auto& fv : rows) {
    CHECK(fv.synthetic);
    CHECK(fv.subject_id == 42);
    for (std::size_t j = 0; j < fv.values.size(); ++j) {
      const int fj = static_cast<int>(j);
      CHECK(fv.values[j] >= quantizer.min[j]);
      CHECK(fv.values[j] <= quantizer.max[j]);
      // On-grid: dequantize(quantize(v)) == v exactly.
      CHECK(quantizer.dequantize(quantizer.quantize(fv.values[j], fj), fj) == fv.values[j]);
    }
  }

  const auto again = semg::generate_subject(generator, quantizer, real, 42, 20, 7);
  REQUIRE(again.size() == rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) REQUIRE(again[i].values == rows[i].values);

  const auto different = semg::generate_subject(generator, quantizer, real, 42, 20, 8);
  bool any_diff = false;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (different[i].values != rows[i].values) any_diff = true;
  }
  CHECK(any_diff);
}
