// Command-line front end for the gesture-classification pipeline:
//   synth    generate a seeded synthetic recording corpus
//   extract  compute the time-domain feature table
//   augment  train per-feature generators and append synthetic subjects
//   train    train master-slave and conventional networks per subject
//   eval     evaluate trained models and emit the accuracy table

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "semg/augment.hpp"
#include "semg/dataset_io.hpp"
#include "semg/errors.hpp"
#include "semg/experiment.hpp"
#include "semg/feature_io.hpp"
#include "semg/model_io.hpp"
#include "semg/rng.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitValidation = 1;
constexpr int kExitRuntime = 2;

void write_run_manifest(const fs::path& path, const json& config) {
  std::ofstream out(path);
  if (!out) throw semg::IoError("cannot write run manifest " + path.string());
  out << config.dump(2) << "\n";
}

std::string synth_state_dir(bool with_synthetic) {
  return with_synthetic ? "with_synthetic" : "without_synthetic";
}

struct SynthArgs {
  int subjects = 4;
  int reps = 20;
  std::uint64_t seed = 42;
  std::string out;
};

int cmd_synth(const SynthArgs& args) {
  const auto segments =
      semg::generate_synthetic_recordings(args.subjects, args.reps, args.seed);
  const fs::path out_dir(args.out);
  const std::size_t files = semg::save_dataset(segments, semg::kDefaultSampleRateHz, out_dir);
  write_run_manifest(out_dir / "run_manifest.json",
                     json{{"command", "synth"},
                          {"subjects", args.subjects},
                          {"reps", args.reps},
                          {"seed", args.seed},
                          {"out", args.out}});
  std::cout << "wrote " << files << " recordings to " << args.out << "\n";
  return 0;
}

struct ExtractArgs {
  std::string data;
  std::string manifest;  // defaults to <data>/manifest.json
  std::string out;
  int ar_order = 4;
};

int cmd_extract(const ExtractArgs& args) {
  const fs::path data_dir(args.data);
  const fs::path manifest =
      args.manifest.empty() ? data_dir / "manifest.json" : fs::path(args.manifest);
  const auto segments = semg::load_dataset(data_dir, manifest);
  if (segments.empty()) {
    throw semg::IngestionError("dataset at " + args.data + " has no recordings");
  }
  semg::FeatureConfig config;
  config.ar_order = args.ar_order;
  std::vector<semg::FeatureVector> rows;
  rows.reserve(segments.size());
  for (const auto& seg : segments) rows.push_back(semg::extract(seg, config));
  semg::write_feature_table(rows, config.dimension(), args.out);
  write_run_manifest(fs::path(args.out).string() + ".manifest.json",
                     json{{"command", "extract"},
                          {"data", args.data},
                          {"manifest", manifest.string()},
                          {"out", args.out},
                          {"ar_order", args.ar_order}});
  std::cout << "wrote " << rows.size() << " feature rows (" << config.dimension()
            << " features) to " << args.out << "\n";
  return 0;
}

struct AugmentArgs {
  std::string features;
  std::string out;
  int synthetic_subjects = 2;
  int length = 20;
  int levels = semg::kDefaultQuantizerLevels;
  int hidden_dim = 32;
  int epochs = 200;
  double learning_rate = 0.05;
  std::uint64_t seed = 1;
  bool argmax = false;
  std::string quantizer_out;  // defaults to <out>.quantizer.json
  std::string generator_out;  // defaults to <out>.generator.json
};

int cmd_augment(const AugmentArgs& args) {
  if (args.synthetic_subjects < 0) {
    throw semg::ArgumentError("--synthetic-subjects must be >= 0");
  }
  const auto table = semg::read_feature_table(args.features);
  if (table.empty()) throw semg::DataError(args.features + ": no feature rows");
  std::vector<semg::FeatureVector> real_rows;
  int max_subject = 0;
  for (const auto& fv : table) {
    if (!fv.synthetic) real_rows.push_back(fv);
    max_subject = std::max(max_subject, fv.subject_id);
  }
  if (real_rows.empty()) throw semg::DataError(args.features + ": no real rows to fit on");

  const auto quantizer = semg::fit_quantizer(real_rows, args.levels);
  const fs::path quantizer_path = args.quantizer_out.empty()
                                      ? fs::path(args.out + ".quantizer.json")
                                      : fs::path(args.quantizer_out);
  semg::save_quantizer(quantizer, quantizer_path);

  // Original rows are carried through byte-for-byte.
  std::ifstream original(args.features, std::ios::binary);
  if (!original) throw semg::IngestionError("cannot read feature table " + args.features);
  std::string original_text((std::istreambuf_iterator<char>(original)),
                            std::istreambuf_iterator<char>());
  std::ofstream out(args.out, std::ios::binary);
  if (!out) throw semg::IoError("cannot write augmented table " + args.out);
  out << original_text;
  if (!original_text.empty() && original_text.back() != '\n') out << '\n';

  fs::path generator_path;
  std::size_t added = 0;
  if (args.synthetic_subjects > 0) {
    const auto series = semg::to_series(real_rows, quantizer);
    semg::GeneratorTrainConfig config;
    config.hidden_dim = args.hidden_dim;
    config.epochs = args.epochs;
    config.learning_rate = args.learning_rate;
    config.seed = args.seed;
    const auto generator =
        semg::train_generator(series, quantizer.levels, quantizer.dimension(), config);
    generator_path = args.generator_out.empty() ? fs::path(args.out + ".generator.json")
                                                : fs::path(args.generator_out);
    semg::save_generator(generator, generator_path);

    for (int s = 0; s < args.synthetic_subjects; ++s) {
      const int new_id = max_subject + 1 + s;
      const auto rows = semg::generate_subject(
          generator, quantizer, real_rows, new_id, args.length,
          semg::rng::derive(args.seed, {0x67656eULL, static_cast<std::uint64_t>(s)}),
          args.argmax);
      for (const auto& fv : rows) out << semg::feature_row_line(fv) << '\n';
      added += rows.size();
    }
  }
  out.close();

  write_run_manifest(fs::path(args.out).string() + ".manifest.json",
                     json{{"command", "augment"},
                          {"features", args.features},
                          {"out", args.out},
                          {"synthetic_subjects", args.synthetic_subjects},
                          {"length", args.length},
                          {"levels", args.levels},
                          {"hidden_dim", args.hidden_dim},
                          {"epochs", args.epochs},
                          {"learning_rate", args.learning_rate},
                          {"seed", args.seed},
                          {"argmax", args.argmax},
                          {"quantizer_out", quantizer_path.string()},
                          {"generator_out", generator_path.string()}});
  std::cout << "appended " << added << " synthetic rows to " << args.out << "\n";
  return 0;
}

struct TrainArgs {
  std::string features;
  std::string out;
  std::string arch = "both";            // both | master-slave | conventional
  std::string with_synthetic = "both";  // both | on | off
  int iterations = semg::kDefaultIterations;
  double learning_rate = semg::kDefaultLearningRate;
  double l2_lambda = 0.0;
  std::uint64_t seed = 7;
  double split_fraction = 0.7;
  std::uint64_t split_seed = 100;
  double stop_tolerance = 0.0;
};

std::vector<semg::Arch> resolve_archs(const std::string& arch) {
  if (arch == "both") return {semg::Arch::MasterSlave, semg::Arch::Conventional};
  if (arch == "master-slave") return {semg::Arch::MasterSlave};
  if (arch == "conventional") return {semg::Arch::Conventional};
  throw semg::ArgumentError("--arch must be one of both, master-slave, conventional");
}

std::vector<bool> resolve_synth_states(const std::string& mode, bool table_has_synthetic) {
  if (mode == "both") {
    return table_has_synthetic ? std::vector<bool>{false, true} : std::vector<bool>{false};
  }
  if (mode == "off") return {false};
  if (mode == "on") {
    if (!table_has_synthetic) {
      throw semg::DataError("--with-synthetic on requires synthetic rows in the table");
    }
    return {true};
  }
  throw semg::ArgumentError("--with-synthetic must be one of both, on, off");
}

int cmd_train(const TrainArgs& args) {
  const auto table = semg::read_feature_table(args.features);
  const bool has_synth = std::any_of(table.begin(), table.end(),
                                     [](const auto& fv) { return fv.synthetic; });
  const auto archs = resolve_archs(args.arch);
  const auto synth_states = resolve_synth_states(args.with_synthetic, has_synth);

  semg::ExperimentConfig config;
  config.split.train_fraction = args.split_fraction;
  config.split.seed = args.split_seed;
  config.train.iterations = args.iterations;
  config.train.learning_rate = args.learning_rate;
  config.train.l2_lambda = args.l2_lambda;
  config.train.seed = args.seed;
  config.train.stop_tolerance = args.stop_tolerance;
  config.train.validate();

  const fs::path out_dir(args.out);
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw semg::IoError("cannot create output directory " + args.out);

  const auto splits = semg::stratified_splits(table, config.split);
  semg::save_splits(splits, config.split, out_dir / "splits.json");

  std::size_t cells_trained = 0;
  for (const auto& split : splits) {
    for (semg::Arch arch : archs) {
      for (bool with_synthetic : synth_states) {
        auto cell = semg::run_cell(table, split, arch, with_synthetic, config);

        const fs::path cell_dir = fs::path("models") / ("subject_" + std::to_string(split.subject_id)) /
                                  semg::arch_name(arch) / synth_state_dir(with_synthetic);
        const fs::path report_dir = fs::path("reports") / ("subject_" + std::to_string(split.subject_id)) /
                                    semg::arch_name(arch) / synth_state_dir(with_synthetic);
        fs::create_directories(out_dir / cell_dir, ec);
        if (ec) throw semg::IoError("cannot create " + (out_dir / cell_dir).string());
        fs::create_directories(out_dir / report_dir, ec);
        if (ec) throw semg::IoError("cannot create " + (out_dir / report_dir).string());

        semg::CellModelFile file;
        file.arch = arch;
        file.subject_id = split.subject_id;
        file.with_synthetic = with_synthetic;
        semg::TrainConfig cell_config = config.train;
        cell_config.seed = semg::rng::derive(
            config.train.seed, {static_cast<std::uint64_t>(split.subject_id)});
        file.train_config = cell_config;
        file.master_slave = std::move(cell.master_slave);
        file.conventional = std::move(cell.conventional);
        for (const auto& report : cell.reports) {
          const fs::path report_path = report_dir / (report.network_name + ".csv");
          semg::write_report_csv(report, out_dir / report_path);
          file.report_files[report.network_name] = report_path.generic_string();
        }
        semg::save_cell_model(file, out_dir / cell_dir / "model.json");
        ++cells_trained;
      }
    }
  }

  write_run_manifest(out_dir / "run_manifest.json",
                     json{{"command", "train"},
                          {"features", args.features},
                          {"out", args.out},
                          {"arch", args.arch},
                          {"with_synthetic", args.with_synthetic},
                          {"iterations", args.iterations},
                          {"learning_rate", args.learning_rate},
                          {"l2_lambda", args.l2_lambda},
                          {"seed", args.seed},
                          {"split_fraction", args.split_fraction},
                          {"split_seed", args.split_seed},
                          {"stop_tolerance", args.stop_tolerance}});
  std::cout << "trained " << cells_trained << " cells into " << args.out << "\n";
  return 0;
}

struct EvalArgs {
  std::string features;
  std::string models;
  std::string out;
};

int cmd_eval(const EvalArgs& args) {
  const auto table = semg::read_feature_table(args.features);
  const fs::path models_dir(args.models);
  auto [splits, split_config] = semg::load_splits(models_dir / "splits.json");

  std::vector<semg::EvaluationRow> rows;
  for (const auto& split : splits) {
    const auto test_rows = semg::cell_test_rows(table, split);
    for (semg::Arch arch : {semg::Arch::MasterSlave, semg::Arch::Conventional}) {
      for (bool with_synthetic : {false, true}) {
        const fs::path model_path = models_dir / "models" /
                                    ("subject_" + std::to_string(split.subject_id)) /
                                    semg::arch_name(arch) / synth_state_dir(with_synthetic) /
                                    "model.json";
        if (!fs::exists(model_path)) continue;
        const auto cell = semg::load_cell_model(model_path);
        semg::EvaluationRow row;
        if (cell.arch == semg::Arch::MasterSlave) {
          row = semg::evaluate(*cell.master_slave, test_rows);
        } else {
          row = semg::evaluate(*cell.conventional, test_rows);
        }
        row.subject_id = cell.subject_id;
        row.arch = cell.arch;
        row.with_synthetic = cell.with_synthetic;
        rows.push_back(row);
      }
    }
  }
  if (rows.empty()) throw semg::IngestionError("no trained models under " + args.models);

  const fs::path out_dir(args.out);
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw semg::IoError("cannot create output directory " + args.out);
  semg::write_evaluation_csv(rows, out_dir / "evaluation.csv");
  semg::write_summary(rows, out_dir / "summary.txt");
  write_run_manifest(out_dir / "run_manifest.json",
                     json{{"command", "eval"},
                          {"features", args.features},
                          {"models", args.models},
                          {"out", args.out}});
  std::cout << "wrote " << rows.size() << " evaluation rows to " << args.out << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sEMG gesture classification pipeline"};
  app.require_subcommand(1);

  SynthArgs synth_args;
  auto* synth = app.add_subcommand("synth", "generate a synthetic recording corpus");
  synth->add_option("--subjects", synth_args.subjects, "number of subjects")
      ->check(CLI::PositiveNumber);
  synth->add_option("--reps", synth_args.reps, "repetitions per gesture")
      ->check(CLI::PositiveNumber);
  synth->add_option("--seed", synth_args.seed, "dataset seed");
  synth->add_option("--out", synth_args.out, "output directory")->required();

  ExtractArgs extract_args;
  auto* extract = app.add_subcommand("extract", "compute the feature table");
  extract->add_option("--data", extract_args.data, "dataset directory")->required();
  extract->add_option("--manifest", extract_args.manifest,
                      "manifest path (default <data>/manifest.json)");
  extract->add_option("--out", extract_args.out, "output CSV path")->required();
  extract->add_option("--ar-order", extract_args.ar_order, "AR model order")
      ->check(CLI::PositiveNumber);

  AugmentArgs augment_args;
  auto* augment = app.add_subcommand("augment", "append LSTM-generated synthetic subjects");
  augment->add_option("--features", augment_args.features, "input feature table")->required();
  augment->add_option("--out", augment_args.out, "output feature table")->required();
  augment->add_option("--synthetic-subjects", augment_args.synthetic_subjects,
                      "synthetic subjects to generate");
  augment->add_option("--length", augment_args.length, "repetitions per synthetic subject")
      ->check(CLI::PositiveNumber);
  augment->add_option("--levels", augment_args.levels, "quantizer levels");
  augment->add_option("--hidden-dim", augment_args.hidden_dim, "LSTM hidden dimension")
      ->check(CLI::PositiveNumber);
  augment->add_option("--epochs", augment_args.epochs, "training epochs per feature")
      ->check(CLI::PositiveNumber);
  augment->add_option("--learning-rate", augment_args.learning_rate, "generator learning rate");
  augment->add_option("--seed", augment_args.seed, "augmentation seed");
  augment->add_flag("--argmax", augment_args.argmax,
                    "deterministic argmax sampling instead of softmax draws");
  augment->add_option("--quantizer-out", augment_args.quantizer_out, "quantizer model path");
  augment->add_option("--generator-out", augment_args.generator_out, "generator model path");

  TrainArgs train_args;
  auto* train = app.add_subcommand("train", "train per-subject classifiers");
  train->add_option("--features", train_args.features, "feature table")->required();
  train->add_option("--out", train_args.out, "output directory")->required();
  train->add_option("--arch", train_args.arch, "both | master-slave | conventional");
  train->add_option("--with-synthetic", train_args.with_synthetic, "both | on | off");
  train->add_option("--iterations", train_args.iterations, "gradient descent iterations")
      ->check(CLI::PositiveNumber);
  train->add_option("--learning-rate", train_args.learning_rate, "learning rate");
  train->add_option("--lambda", train_args.l2_lambda, "L2 regularization strength");
  train->add_option("--seed", train_args.seed, "training seed");
  train->add_option("--split", train_args.split_fraction, "train fraction of the split");
  train->add_option("--split-seed", train_args.split_seed, "split seed");
  train->add_option("--stop-tolerance", train_args.stop_tolerance,
                    "optional early stop on |delta cost| (0 disables)");

  EvalArgs eval_args;
  auto* eval = app.add_subcommand("eval", "evaluate trained models");
  eval->add_option("--features", eval_args.features, "feature table")->required();
  eval->add_option("--models", eval_args.models, "train output directory")->required();
  eval->add_option("--out", eval_args.out, "output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n" << app.help() << "\n";
    return kExitValidation;
  }

  try {
    if (synth->parsed()) return cmd_synth(synth_args);
    if (extract->parsed()) return cmd_extract(extract_args);
    if (augment->parsed()) return cmd_augment(augment_args);
    if (train->parsed()) return cmd_train(train_args);
    if (eval->parsed()) return cmd_eval(eval_args);
  } catch (const semg::ArgumentError& e) {
    std::cerr << "argument error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const semg::DegenerateInputError& e) {
    std::cerr << "degenerate input: " << e.what() << "\n";
    return kExitValidation;
  } catch (const semg::DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const semg::FormatError& e) {
    std::cerr << "format error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const semg::IngestionError& e) {
    std::cerr << "ingestion error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const semg::DivergenceError& e) {
    std::cerr << "divergence: " << e.what() << "\n";
    return kExitRuntime;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return 0;
}
