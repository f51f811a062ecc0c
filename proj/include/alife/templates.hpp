#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "alife/normalize.hpp"

namespace alife {

/// The three lip-movement groups of French vowels: opening (/ba/),
/// stretch (/bi/) and forward movement (/bou/).
enum class VisemeClass { BA = 0, BI = 1, BOU = 2 };
inline constexpr std::array<VisemeClass, 3> kVisemeClasses = {VisemeClass::BA, VisemeClass::BI, VisemeClass::BOU};

const char* class_name(VisemeClass c);
const char* class_description(VisemeClass c);
/// Accepts "BA", "ba", "/ba/" and so on.
VisemeClass parse_class(const std::string& label);

/// Syllable descriptive template: pointwise mean of the training curves.
struct VisemeTemplate {
  VisemeClass cls = VisemeClass::BA;
  std::array<std::vector<double>, 3> curves;
  int sample_count = 0;

  const std::vector<double>& operator[](FeatureId id) const { return curves[static_cast<int>(id)]; }
  friend bool operator==(const VisemeTemplate&, const VisemeTemplate&) = default;
};

VisemeTemplate build_template(VisemeClass cls, std::span<const NormalizedUtterance> utterances);

}  // namespace alife
