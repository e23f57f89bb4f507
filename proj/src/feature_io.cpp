#include "semg/feature_io.hpp"

#include <fstream>

#include "semg/errors.hpp"
#include "semg/text.hpp"

namespace semg {

namespace {
constexpr int kMetadataColumns = 4;  // subject, gesture, repetition, synthetic
}

std::string feature_row_line(const FeatureVector& fv) {
  std::string line = std::to_string(fv.subject_id) + ',' +
                     gesture_name(fv.label.gesture_id) + ',' +
                     std::to_string(fv.repetition_index) + ',' +
                     (fv.synthetic ? "1" : "0");
  for (double v : fv.values) {
    line += ',';
    line += text::format_double(v);
  }
  return line;
}

void write_feature_table(const std::vector<FeatureVector>& rows, int dimension,
                         const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write feature table " + path.string());
  out << "subject,gesture,repetition,synthetic";
  for (int j = 1; j <= dimension; ++j) out << ",f" << j;
  out << '\n';
  for (const auto& fv : rows) {
    if (static_cast<int>(fv.values.size()) != dimension) {
      throw DataError("feature row dimension mismatch while writing " + path.string());
    }
    out << feature_row_line(fv) << '\n';
  }
}

std::vector<FeatureVector> read_feature_table(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IngestionError("cannot read feature table " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw FormatError(path.string() + ": empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = text::split_csv_line(line);
  if (header.size() < kMetadataColumns + 1 || header[0] != "subject" ||
      header[1] != "gesture" || header[2] != "repetition" || header[3] != "synthetic") {
    throw FormatError(path.string() + ": unexpected feature table header");
  }
  const std::size_t d = header.size() - kMetadataColumns;

  std::vector<FeatureVector> rows;
  std::size_t row_number = 1;
  while (std::getline(in, line)) {
    ++row_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = text::split_csv_line(line);
    const std::string ctx = path.string() + " row " + std::to_string(row_number);
    if (fields.size() != header.size()) {
      throw FormatError(ctx + ": expected " + std::to_string(header.size()) +
                        " columns, found " + std::to_string(fields.size()));
    }
    FeatureVector fv;
    fv.subject_id = static_cast<int>(text::parse_long(fields[0], ctx));
    fv.label = GestureLabel::of(gesture_from_name(fields[1]));
    fv.repetition_index = static_cast<int>(text::parse_long(fields[2], ctx));
    const long synthetic = text::parse_long(fields[3], ctx);
    if (synthetic != 0 && synthetic != 1) {
      throw FormatError(ctx + ": synthetic flag must be 0 or 1");
    }
    fv.synthetic = synthetic == 1;
    fv.values.reserve(d);
    for (std::size_t j = 0; j < d; ++j) {
      fv.values.push_back(text::parse_double(fields[kMetadataColumns + j], ctx));
    }
    rows.push_back(std::move(fv));
  }
  return rows;
}

}  // namespace semg
