#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "semg/features.hpp"

namespace semg {

// Feature table CSV: header subject,gesture,repetition,synthetic,f1..fd,
// one row per FeatureVector, full round-trip precision.
void write_feature_table(const std::vector<FeatureVector>& rows, int dimension,
                         const std::filesystem::path& path);

std::string feature_row_line(const FeatureVector& fv);

std::vector<FeatureVector> read_feature_table(const std::filesystem::path& path);

}  // namespace semg
