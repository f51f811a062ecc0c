#pragma once

#include <filesystem>
#include <iosfwd>
#include <vector>

#include "alife/classify.hpp"
#include "alife/features.hpp"
#include "alife/normalize.hpp"
#include "alife/templates.hpp"

namespace alife {

/// Everything `recognize` needs: templates, trained units and the parameter
/// snapshot the templates were built with.
struct ModelBundle {
  int omega = 10;
  std::vector<VisemeTemplate> templates;
  UnitMatrix units;
  ClassifierParams classifier;
  NormalizationParams normalization;
  DarkParams dark;

  friend bool operator==(const ModelBundle&, const ModelBundle&) = default;
};

inline constexpr int kBundleFormatVersion = 1;

/// Plain-text, versioned, checksummed. Numbers are written in shortest
/// round-trip form so load(save(b)) == b exactly.
void write_bundle(const ModelBundle& b, std::ostream& out);
ModelBundle read_bundle(std::istream& in);

void save_bundle(const ModelBundle& b, const std::filesystem::path& path);
ModelBundle load_bundle(const std::filesystem::path& path);

/// Throws "omega mismatch" when the bundle was built for another omega.
void check_compatible(const ModelBundle& b, const NormalizationParams& run);

}  // namespace alife
