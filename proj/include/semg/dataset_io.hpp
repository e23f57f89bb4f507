#pragma once

#include <filesystem>
#include <vector>

#include "semg/signal_model.hpp"

namespace semg {

// Writes one CSV per segment (header ch1,ch2,ch3, one row per sample, full
// round-trip precision) plus manifest.json listing every recording.
// Returns the number of files written.
std::size_t save_dataset(const std::vector<Segment>& segments, double sample_rate_hz,
                         const std::filesystem::path& out_dir);

// Ingests the manifest's recordings into segments, sorted by (subject,
// gesture, repetition). Missing files raise IngestionError; malformed
// contents raise FormatError naming the row.
std::vector<Segment> load_dataset(const std::filesystem::path& root,
                                  const std::filesystem::path& manifest);

}  // namespace semg
