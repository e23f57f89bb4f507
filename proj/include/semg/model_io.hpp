#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "semg/experiment.hpp"

namespace semg {

// Training report CSV: iteration,cost,train_ca,test_ca (test_ca blank when
// no monitor was supplied). Lossless round trip.
void write_report_csv(const TrainingReport& report, const std::filesystem::path& path);
TrainingReport read_report_csv(const std::filesystem::path& path);

// One trained cell persisted as JSON: arch, subject, synthetic state, the
// resolved training config, the scaler, and each network with its weights,
// init seed, and report file reference.
struct CellModelFile {
  Arch arch = Arch::MasterSlave;
  int subject_id = 0;
  bool with_synthetic = false;
  TrainConfig train_config;
  std::optional<MasterSlaveModel> master_slave;
  std::optional<ConventionalModel> conventional;
  std::map<std::string, std::string> report_files;  // network name -> path
};

void save_cell_model(const CellModelFile& cell, const std::filesystem::path& path);
CellModelFile load_cell_model(const std::filesystem::path& path);

void save_splits(const std::vector<SubjectSplit>& splits, const SplitConfig& config,
                 const std::filesystem::path& path);
std::pair<std::vector<SubjectSplit>, SplitConfig> load_splits(
    const std::filesystem::path& path);

// Table CSV: subject,arch,with_synthetic,master_ca,slave_ca,end_to_end_ca,
// percentages with 3 decimals, blank cells where a metric does not apply.
void write_evaluation_csv(const std::vector<EvaluationRow>& rows,
                          const std::filesystem::path& path);
std::vector<EvaluationRow> read_evaluation_csv(const std::filesystem::path& path);

// Human-readable per-subject deltas from augmentation; cells whose
// end-to-end CA decreased are flagged.
void write_summary(const std::vector<EvaluationRow>& rows,
                   const std::filesystem::path& path);

}  // namespace semg
