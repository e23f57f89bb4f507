#include "semg/model_io.hpp"

#include <algorithm>
#include <fstream>

#include <json.hpp>

#include "semg/errors.hpp"
#include "semg/text.hpp"

namespace semg {

namespace {

using nlohmann::json;

json network_to_json(const Network& net, const std::string& report_file) {
  json j;
  j["layer_sizes"] = net.layer_sizes;
  j["weights"] = net.weights;  // row-major, bias in the last column
  j["init_seed"] = net.init_seed;
  j["report"] = report_file;
  return j;
}

Network network_from_json(const json& j) {
  Network net;
  net.layer_sizes = j.at("layer_sizes").get<std::vector<int>>();
  net.weights = j.at("weights").get<std::vector<std::vector<double>>>();
  net.init_seed = j.at("init_seed").get<std::uint64_t>();
  if (net.layer_sizes.size() < 2 || net.weights.size() != net.layer_sizes.size() - 1) {
    throw FormatError("network JSON: inconsistent layer/weight shapes");
  }
  for (std::size_t z = 0; z + 1 < net.layer_sizes.size(); ++z) {
    const auto expected = static_cast<std::size_t>(net.layer_sizes[z + 1]) *
                          (static_cast<std::size_t>(net.layer_sizes[z]) + 1);
    if (net.weights[z].size() != expected) {
      throw FormatError("network JSON: bad weight matrix shape at transition " +
                        std::to_string(z));
    }
  }
  return net;
}

json scaler_to_json(const FeatureScaler& scaler) {
  return json{{"mean", scaler.mean}, {"stddev", scaler.stddev}};
}

FeatureScaler scaler_from_json(const json& j) {
  FeatureScaler scaler;
  scaler.mean = j.at("mean").get<std::vector<double>>();
  scaler.stddev = j.at("stddev").get<std::vector<double>>();
  if (scaler.mean.size() != scaler.stddev.size()) {
    throw FormatError("scaler JSON: mean/stddev length mismatch");
  }
  return scaler;
}

json train_config_to_json(const TrainConfig& config) {
  return json{{"iterations", config.iterations},
              {"learning_rate", config.learning_rate},
              {"l2_lambda", config.l2_lambda},
              {"seed", config.seed},
              {"stop_tolerance", config.stop_tolerance}};
}

TrainConfig train_config_from_json(const json& j) {
  TrainConfig config;
  config.iterations = j.at("iterations").get<int>();
  config.learning_rate = j.at("learning_rate").get<double>();
  config.l2_lambda = j.at("l2_lambda").get<double>();
  config.seed = j.at("seed").get<std::uint64_t>();
  config.stop_tolerance = j.at("stop_tolerance").get<double>();
  return config;
}

std::string report_file_for(const CellModelFile& cell, const std::string& name) {
  const auto it = cell.report_files.find(name);
  return it == cell.report_files.end() ? std::string() : it->second;
}

}  // namespace

void write_report_csv(const TrainingReport& report, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write report " + path.string());
  out << "iteration,cost,train_ca,test_ca\n";
  for (const auto& rec : report.records) {
    out << rec.iteration << ',' << text::format_double(rec.cost) << ','
        << text::format_double(rec.train_ca) << ',';
    if (rec.has_test) out << text::format_double(rec.test_ca);
    out << '\n';
  }
}

TrainingReport read_report_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IngestionError("cannot read report " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw FormatError(path.string() + ": empty report");
  TrainingReport report;
  report.network_name = path.stem().string();
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = text::split_csv_line(line);
    const std::string ctx = path.string() + " row " + std::to_string(row);
    if (fields.size() != 4) throw FormatError(ctx + ": expected 4 columns");
    IterationRecord rec;
    rec.iteration = static_cast<int>(text::parse_long(fields[0], ctx));
    rec.cost = text::parse_double(fields[1], ctx);
    rec.train_ca = text::parse_double(fields[2], ctx);
    if (!fields[3].empty()) {
      rec.test_ca = text::parse_double(fields[3], ctx);
      rec.has_test = true;
    }
    report.records.push_back(rec);
  }
  return report;
}

void save_cell_model(const CellModelFile& cell, const std::filesystem::path& path) {
  json j;
  j["arch"] = arch_name(cell.arch);
  j["subject"] = cell.subject_id;
  j["with_synthetic"] = cell.with_synthetic;
  j["train_config"] = train_config_to_json(cell.train_config);
  json nets;
  if (cell.arch == Arch::MasterSlave) {
    if (!cell.master_slave.has_value()) {
      throw ArgumentError("save_cell_model: missing master-slave model");
    }
    const auto& model = *cell.master_slave;
    j["scaler"] = scaler_to_json(model.scaler);
    nets["master"] = network_to_json(model.master, report_file_for(cell, "master"));
    nets["slave_static"] =
        network_to_json(model.slave_static, report_file_for(cell, "slave_static"));
    nets["slave_dynamic"] =
        network_to_json(model.slave_dynamic, report_file_for(cell, "slave_dynamic"));
  } else {
    if (!cell.conventional.has_value()) {
      throw ArgumentError("save_cell_model: missing conventional model");
    }
    const auto& model = *cell.conventional;
    j["scaler"] = scaler_to_json(model.scaler);
    nets["conventional"] = network_to_json(model.net, report_file_for(cell, "conventional"));
  }
  j["networks"] = std::move(nets);
  std::ofstream out(path);
  if (!out) throw IoError("cannot write model file " + path.string());
  out << j.dump() << "\n";
}

CellModelFile load_cell_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IngestionError("cannot read model file " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw FormatError("model file " + path.string() + ": " + e.what());
  }
  CellModelFile cell;
  cell.arch = arch_from_name(j.at("arch").get<std::string>());
  cell.subject_id = j.at("subject").get<int>();
  cell.with_synthetic = j.at("with_synthetic").get<bool>();
  cell.train_config = train_config_from_json(j.at("train_config"));
  const auto& nets = j.at("networks");
  if (cell.arch == Arch::MasterSlave) {
    MasterSlaveModel model;
    model.scaler = scaler_from_json(j.at("scaler"));
    model.master = network_from_json(nets.at("master"));
    model.slave_static = network_from_json(nets.at("slave_static"));
    model.slave_dynamic = network_from_json(nets.at("slave_dynamic"));
    cell.master_slave = std::move(model);
  } else {
    ConventionalModel model;
    model.scaler = scaler_from_json(j.at("scaler"));
    model.net = network_from_json(nets.at("conventional"));
    cell.conventional = std::move(model);
  }
  for (const auto& [name, net] : nets.items()) {
    cell.report_files[name] = net.value("report", std::string());
  }
  return cell;
}

void save_splits(const std::vector<SubjectSplit>& splits, const SplitConfig& config,
                 const std::filesystem::path& path) {
  json j;
  j["train_fraction"] = config.train_fraction;
  j["seed"] = config.seed;
  auto& arr = j["subjects"] = json::array();
  for (const auto& split : splits) {
    arr.push_back({{"subject", split.subject_id},
                   {"train_rows", split.train_rows},
                   {"test_rows", split.test_rows}});
  }
  std::ofstream out(path);
  if (!out) throw IoError("cannot write splits file " + path.string());
  out << j.dump(2) << "\n";
}

std::pair<std::vector<SubjectSplit>, SplitConfig> load_splits(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IngestionError("cannot read splits file " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw FormatError("splits file " + path.string() + ": " + e.what());
  }
  SplitConfig config;
  config.train_fraction = j.at("train_fraction").get<double>();
  config.seed = j.at("seed").get<std::uint64_t>();
  std::vector<SubjectSplit> splits;
  for (const auto& sj : j.at("subjects")) {
    SubjectSplit split;
    split.subject_id = sj.at("subject").get<int>();
    split.train_rows = sj.at("train_rows").get<std::vector<std::size_t>>();
    split.test_rows = sj.at("test_rows").get<std::vector<std::size_t>>();
    splits.push_back(std::move(split));
  }
  return {std::move(splits), config};
}

void write_evaluation_csv(const std::vector<EvaluationRow>& rows,
                          const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write evaluation table " + path.string());
  out << "subject,arch,with_synthetic,master_ca,slave_ca,end_to_end_ca\n";
  for (const auto& row : rows) {
    out << row.subject_id << ',' << arch_name(row.arch) << ','
        << (row.with_synthetic ? 1 : 0) << ',';
    if (row.master_ca.has_value()) out << text::format_fixed(*row.master_ca, 3);
    out << ',';
    if (row.slave_ca.has_value()) out << text::format_fixed(*row.slave_ca, 3);
    out << ',' << text::format_fixed(row.end_to_end_ca, 3) << '\n';
  }
}

std::vector<EvaluationRow> read_evaluation_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IngestionError("cannot read evaluation table " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw FormatError(path.string() + ": empty table");
  std::vector<EvaluationRow> rows;
  std::size_t row_number = 1;
  while (std::getline(in, line)) {
    ++row_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = text::split_csv_line(line);
    const std::string ctx = path.string() + " row " + std::to_string(row_number);
    if (fields.size() != 6) throw FormatError(ctx + ": expected 6 columns");
    EvaluationRow row;
    row.subject_id = static_cast<int>(text::parse_long(fields[0], ctx));
    row.arch = arch_from_name(fields[1]);
    row.with_synthetic = text::parse_long(fields[2], ctx) == 1;
    if (!fields[3].empty()) row.master_ca = text::parse_double(fields[3], ctx);
    if (!fields[4].empty()) row.slave_ca = text::parse_double(fields[4], ctx);
    row.end_to_end_ca = text::parse_double(fields[5], ctx);
    rows.push_back(row);
  }
  return rows;
}

void write_summary(const std::vector<EvaluationRow>& rows,
                   const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write summary " + path.string());

  auto find_row = [&](int subject, Arch arch, bool with_synthetic) -> const EvaluationRow* {
    for (const auto& row : rows) {
      if (row.subject_id == subject && row.arch == arch &&
          row.with_synthetic == with_synthetic) {
        return &row;
      }
    }
    return nullptr;
  };

  std::vector<int> subjects;
  for (const auto& row : rows) {
    if (std::find(subjects.begin(), subjects.end(), row.subject_id) == subjects.end()) {
      subjects.push_back(row.subject_id);
    }
  }
  std::sort(subjects.begin(), subjects.end());

  out << "per-subject classification accuracy deltas from synthetic augmentation\n";
  int decreased = 0;
  for (int subject : subjects) {
    for (Arch arch : {Arch::MasterSlave, Arch::Conventional}) {
      const auto* without = find_row(subject, arch, false);
      const auto* with = find_row(subject, arch, true);
      if (without == nullptr) continue;
      out << "subject " << subject << ' ' << arch_name(arch) << ": end-to-end "
          << text::format_fixed(without->end_to_end_ca, 3) << '%';
      if (with != nullptr) {
        const double delta = with->end_to_end_ca - without->end_to_end_ca;
        out << " -> " << text::format_fixed(with->end_to_end_ca, 3) << "% (delta "
            << (delta >= 0.0 ? "+" : "") << text::format_fixed(delta, 3) << ')';
        if (delta < 0.0) {
          out << " [decreased]";
          ++decreased;
        }
        if (arch == Arch::MasterSlave && without->master_ca.has_value() &&
            with->master_ca.has_value()) {
          const double master_delta = *with->master_ca - *without->master_ca;
          out << ", master " << text::format_fixed(*without->master_ca, 3) << "% -> "
              << text::format_fixed(*with->master_ca, 3) << "% (delta "
              << (master_delta >= 0.0 ? "+" : "") << text::format_fixed(master_delta, 3)
              << ')';
          if (master_delta < 0.0) {
            out << " [decreased]";
            ++decreased;
          }
        }
      } else {
        out << " (no augmented run)";
      }
      out << '\n';
    }
  }
  out << "cells where augmentation decreased CA: " << decreased << '\n';
}

}  // namespace semg
