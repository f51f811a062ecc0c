#include "alife/templates.hpp"

#include <algorithm>

#include "alife/error.hpp"

namespace alife {

const char* class_name(VisemeClass c) {
  switch (c) {
    case VisemeClass::BA: return "BA";
    case VisemeClass::BI: return "BI";
    case VisemeClass::BOU: return "BOU";
  }
  return "?";
}

const char* class_description(VisemeClass c) {
  switch (c) {
    case VisemeClass::BA: return "opening";
    case VisemeClass::BI: return "stretch";
    case VisemeClass::BOU: return "forward movement";
  }
  return "?";
}

VisemeClass parse_class(const std::string& label) {
  std::string s;
  for (char ch : label) {
    if (ch != '/' && ch != ' ') s.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(ch))));
  }
  for (auto c : kVisemeClasses) {
    if (s == class_name(c)) return c;
  }
  throw Error("unknown viseme class: " + label);
}

VisemeTemplate build_template(VisemeClass cls, std::span<const NormalizedUtterance> utterances) {
  if (utterances.empty()) throw Error("cannot build a template from zero utterances");
  const int omega = utterances.front().omega();
  VisemeTemplate t;
  t.cls = cls;
  t.sample_count = static_cast<int>(utterances.size());
  for (auto id : kFeatures) {
    for (const auto& u : utterances) {
      if (u[id].values.size() != static_cast<std::size_t>(omega)) {
        throw Error("ragged curve lengths in template training set");
      }
    }
    auto& curve = t.curves[static_cast<int>(id)];
    curve.resize(static_cast<std::size_t>(omega));
    // Sorted summation makes the mean independent of utterance order.
    std::vector<double> column(utterances.size());
    for (int w = 0; w < omega; ++w) {
      for (std::size_t k = 0; k < utterances.size(); ++k) column[k] = utterances[k][id].values[w];
      std::sort(column.begin(), column.end());
      double sum = 0.0;
      for (double x : column) sum += x;
      curve[w] = sum / static_cast<double>(utterances.size());
    }
  }
  return t;
}

}  // namespace alife
