#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "semg/master_slave.hpp"

namespace semg {

struct SplitConfig {
  double train_fraction = 0.7;
  std::uint64_t seed = 0;

  void validate() const;
};

// Row indices (into the feature table) of one subject's stratified split.
// Only real rows participate; synthetic rows never enter a test set.
struct SubjectSplit {
  int subject_id = 0;
  std::vector<std::size_t> train_rows;
  std::vector<std::size_t> test_rows;
};

// Per-subject, per-gesture stratified shuffle split over the real rows,
// deterministic in the seed. Every gesture keeps at least one row on each
// side.
std::vector<SubjectSplit> stratified_splits(const std::vector<FeatureVector>& table,
                                            const SplitConfig& config);

struct ExperimentConfig {
  SplitConfig split;
  TrainConfig train;
};

// One (subject, architecture, synthetic-state) training outcome.
struct ExperimentCell {
  int subject_id = 0;
  Arch arch = Arch::MasterSlave;
  bool with_synthetic = false;
  std::optional<MasterSlaveModel> master_slave;
  std::optional<ConventionalModel> conventional;
  std::vector<TrainingReport> reports;
  EvaluationRow row;
};

struct ExperimentResult {
  std::vector<SubjectSplit> splits;
  std::vector<ExperimentCell> cells;

  std::vector<EvaluationRow> rows() const;
};

// Gathers the training rows for a cell: the subject's real training split,
// plus every synthetic row when with_synthetic is set.
std::vector<FeatureVector> cell_training_rows(const std::vector<FeatureVector>& table,
                                              const SubjectSplit& split,
                                              bool with_synthetic);

// The subject's real test rows; throws DataError if a synthetic row leaks in.
std::vector<FeatureVector> cell_test_rows(const std::vector<FeatureVector>& table,
                                          const SubjectSplit& split);

// Trains and evaluates one cell. The per-cell seed is derived from the
// subject only, so with/without-synthetic cells start from matched
// initializations.
ExperimentCell run_cell(const std::vector<FeatureVector>& table, const SubjectSplit& split,
                        Arch arch, bool with_synthetic, const ExperimentConfig& config);

// The full table: for every real subject, both architectures, without and
// (when the table contains synthetic rows) with synthetic training data.
// Row order: subject ascending, master-slave before conventional, without
// before with.
ExperimentResult run_experiment(const std::vector<FeatureVector>& table,
                                const ExperimentConfig& config);

}  // namespace semg
