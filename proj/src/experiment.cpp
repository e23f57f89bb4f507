#include "semg/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "semg/errors.hpp"
#include "semg/rng.hpp"

namespace semg {

void SplitConfig::validate() const {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw ArgumentError("SplitConfig: train_fraction must lie in (0, 1)");
  }
}

std::vector<SubjectSplit> stratified_splits(const std::vector<FeatureVector>& table,
                                            const SplitConfig& config) {
  config.validate();
  // subject -> gesture -> row indices, real rows only
  std::map<int, std::map<int, std::vector<std::size_t>>> by_subject;
  for (std::size_t i = 0; i < table.size(); ++i) {
    if (table[i].synthetic) continue;
    by_subject[table[i].subject_id][static_cast<int>(table[i].label.gesture_id)].push_back(i);
  }
  if (by_subject.empty()) throw DataError("stratified_splits: no real rows in table");

  std::vector<SubjectSplit> splits;
  splits.reserve(by_subject.size());
  for (const auto& [subject, gestures] : by_subject) {
    SubjectSplit split;
    split.subject_id = subject;
    for (const auto& [gesture, indices] : gestures) {
      if (indices.size() < 2) {
        throw DataError("stratified_splits: subject " + std::to_string(subject) +
                        " gesture " + gesture_name(static_cast<GestureId>(gesture)) +
                        " has fewer than 2 repetitions");
      }
      std::vector<std::size_t> shuffled = indices;
      rng::Stream stream(rng::derive(config.seed, {static_cast<std::uint64_t>(subject),
                                                   static_cast<std::uint64_t>(gesture)}));
      // Fisher-Yates with the pinned stream.
      for (std::size_t k = shuffled.size(); k > 1; --k) {
        const auto j = static_cast<std::size_t>(stream.below(static_cast<int>(k)));
        std::swap(shuffled[k - 1], shuffled[j]);
      }
      const auto n = shuffled.size();
      auto n_train = static_cast<std::size_t>(
          std::lround(config.train_fraction * static_cast<double>(n)));
      n_train = std::clamp<std::size_t>(n_train, 1, n - 1);
      split.train_rows.insert(split.train_rows.end(), shuffled.begin(),
                              shuffled.begin() + static_cast<std::ptrdiff_t>(n_train));
      split.test_rows.insert(split.test_rows.end(),
                             shuffled.begin() + static_cast<std::ptrdiff_t>(n_train),
                             shuffled.end());
    }
    std::sort(split.train_rows.begin(), split.train_rows.end());
    std::sort(split.test_rows.begin(), split.test_rows.end());
    splits.push_back(std::move(split));
  }
  return splits;
}

std::vector<FeatureVector> cell_training_rows(const std::vector<FeatureVector>& table,
                                              const SubjectSplit& split,
                                              bool with_synthetic) {
  std::vector<FeatureVector> rows;
  rows.reserve(split.train_rows.size());
  for (std::size_t i : split.train_rows) rows.push_back(table[i]);
  if (with_synthetic) {
    for (const auto& fv : table) {
      if (fv.synthetic) rows.push_back(fv);
    }
  }
  return rows;
}

std::vector<FeatureVector> cell_test_rows(const std::vector<FeatureVector>& table,
                                          const SubjectSplit& split) {
  std::vector<FeatureVector> rows;
  rows.reserve(split.test_rows.size());
  for (std::size_t i : split.test_rows) {
    if (table[i].synthetic) {
      throw DataError("test split for subject " + std::to_string(split.subject_id) +
                      " contains a synthetic row");
    }
    rows.push_back(table[i]);
  }
  return rows;
}

ExperimentCell run_cell(const std::vector<FeatureVector>& table, const SubjectSplit& split,
                        Arch arch, bool with_synthetic, const ExperimentConfig& config) {
  ExperimentCell cell;
  cell.subject_id = split.subject_id;
  cell.arch = arch;
  cell.with_synthetic = with_synthetic;

  const auto train_rows = cell_training_rows(table, split, with_synthetic);
  const auto test_rows = cell_test_rows(table, split);

  TrainConfig cell_config = config.train;
  cell_config.seed =
      rng::derive(config.train.seed, {static_cast<std::uint64_t>(split.subject_id)});

  if (arch == Arch::MasterSlave) {
    auto [model, reports] = train_master_slave(train_rows, cell_config, &test_rows);
    cell.row = evaluate(model, test_rows);
    cell.master_slave = std::move(model);
    cell.reports = {std::move(reports.master), std::move(reports.slave_static),
                    std::move(reports.slave_dynamic)};
  } else {
    auto [model, report] = train_conventional(train_rows, cell_config, &test_rows);
    cell.row = evaluate(model, test_rows);
    cell.conventional = std::move(model);
    cell.reports = {std::move(report)};
  }
  cell.row.subject_id = split.subject_id;
  cell.row.arch = arch;
  cell.row.with_synthetic = with_synthetic;
  return cell;
}

std::vector<EvaluationRow> ExperimentResult::rows() const {
  std::vector<EvaluationRow> out;
  out.reserve(cells.size());
  for (const auto& cell : cells) out.push_back(cell.row);
  return out;
}

ExperimentResult run_experiment(const std::vector<FeatureVector>& table,
                                const ExperimentConfig& config) {
  ExperimentResult result;
  result.splits = stratified_splits(table, config.split);
  const bool has_synthetic = std::any_of(table.begin(), table.end(),
                                         [](const FeatureVector& fv) { return fv.synthetic; });
  std::vector<bool> synth_states = has_synthetic ? std::vector<bool>{false, true}
                                                 : std::vector<bool>{false};
  for (const auto& split : result.splits) {
    for (Arch arch : {Arch::MasterSlave, Arch::Conventional}) {
      for (bool with_synthetic : synth_states) {
        result.cells.push_back(run_cell(table, split, arch, with_synthetic, config));
      }
    }
  }
  return result;
}

}  // namespace semg
