#include "semg/dataset_io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "semg/errors.hpp"
#include "semg/text.hpp"

namespace semg {

namespace {

std::string recording_relative_path(const Segment& seg) {
  char rep[16];
  std::snprintf(rep, sizeof(rep), "%02d", seg.repetition_index);
  return "s" + std::to_string(seg.subject_id) + "/" +
         gesture_name(seg.label.gesture_id) + "_r" + rep + ".csv";
}

}  // namespace

std::size_t save_dataset(const std::vector<Segment>& segments, double sample_rate_hz,
                         const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create output directory " + out_dir.string());

  nlohmann::json manifest;
  manifest["sample_rate_hz"] = sample_rate_hz;
  auto& recordings = manifest["recordings"] = nlohmann::json::array();

  for (const auto& seg : segments) {
    const std::string rel = recording_relative_path(seg);
    const auto path = out_dir / rel;
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) throw IoError("cannot create directory " + path.parent_path().string());

    std::ofstream out(path);
    if (!out) throw IoError("cannot write recording file " + path.string());
    out << "ch1,ch2,ch3\n";
    const std::size_t n = seg.window_length();
    for (std::size_t i = 0; i < n; ++i) {
      out << text::format_double(seg.channel_windows[0][i]) << ','
          << text::format_double(seg.channel_windows[1][i]) << ','
          << text::format_double(seg.channel_windows[2][i]) << '\n';
    }
    recordings.push_back({{"subject", seg.subject_id},
                          {"gesture", gesture_name(seg.label.gesture_id)},
                          {"repetition", seg.repetition_index},
                          {"file", rel}});
  }

  std::ofstream mf(out_dir / "manifest.json");
  if (!mf) throw IoError("cannot write manifest " + (out_dir / "manifest.json").string());
  mf << manifest.dump(2) << "\n";
  return segments.size();
}

std::vector<Segment> load_dataset(const std::filesystem::path& root,
                                  const std::filesystem::path& manifest) {
  std::ifstream mf(manifest);
  if (!mf) throw IngestionError("cannot read manifest " + manifest.string());
  nlohmann::json j;
  try {
    mf >> j;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError("manifest " + manifest.string() + ": " + e.what());
  }

  std::vector<Segment> segments;
  if (!j.contains("recordings")) return segments;
  for (const auto& rec : j.at("recordings")) {
    const int subject = rec.at("subject").get<int>();
    const GestureId gesture = gesture_from_name(rec.at("gesture").get<std::string>());
    const int repetition = rec.at("repetition").get<int>();
    const auto path = root / rec.at("file").get<std::string>();

    std::ifstream in(path);
    if (!in) throw IngestionError("missing recording file " + path.string());

    std::string line;
    if (!std::getline(in, line)) {
      throw FormatError(path.string() + ": empty file");
    }
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto header = text::split_csv_line(line);
    if (header.size() != static_cast<std::size_t>(kChannelCount)) {
      throw FormatError(path.string() + ": expected 3 channel columns, found " +
                        std::to_string(header.size()));
    }

    Segment seg;
    seg.label = GestureLabel::of(gesture);
    seg.subject_id = subject;
    seg.repetition_index = repetition;
    std::size_t row = 1;
    while (std::getline(in, line)) {
      ++row;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;
      const auto fields = text::split_csv_line(line);
      if (fields.size() != static_cast<std::size_t>(kChannelCount)) {
        throw FormatError(path.string() + " row " + std::to_string(row) +
                          ": expected 3 columns, found " + std::to_string(fields.size()));
      }
      for (int c = 0; c < kChannelCount; ++c) {
        seg.channel_windows[static_cast<std::size_t>(c)].push_back(text::parse_double(
            fields[static_cast<std::size_t>(c)],
            path.string() + " row " + std::to_string(row)));
      }
    }
    if (seg.window_length() < kMinIngestedWindow) {
      throw FormatError(path.string() + ": window has " +
                        std::to_string(seg.window_length()) + " samples, need at least " +
                        std::to_string(kMinIngestedWindow));
    }
    segments.push_back(std::move(seg));
  }

  std::sort(segments.begin(), segments.end(), [](const Segment& a, const Segment& b) {
    if (a.subject_id != b.subject_id) return a.subject_id < b.subject_id;
    if (a.label.gesture_id != b.label.gesture_id) {
      return static_cast<int>(a.label.gesture_id) < static_cast<int>(b.label.gesture_id);
    }
    return a.repetition_index < b.repetition_index;
  });
  return segments;
}

}  // namespace semg
