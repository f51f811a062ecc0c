#include "alife/bundle.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "alife/error.hpp"
#include "text.hpp"

namespace alife {

namespace {

constexpr const char* kMagic = "ALIFE-MODEL";

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

const char* scorer_name(ScorerMode m) { return m == ScorerMode::Trained ? "trained" : "uniform"; }
const char* aggregation_name(DarkAggregation a) { return a == DarkAggregation::Sum ? "sum" : "mean"; }

[[noreturn]] void corrupted(const std::string& why) { throw Error("corrupted model bundle: " + why); }

std::size_t class_slot(const ModelBundle& b, VisemeClass c) {
  for (std::size_t j = 0; j < b.templates.size(); ++j) {
    if (b.templates[j].cls == c) return j;
  }
  corrupted(std::string("class ") + class_name(c) + " not declared");
}

}  // namespace

void write_bundle(const ModelBundle& b, std::ostream& out) {
  using text::format_double;
  std::ostringstream body;
  body << kMagic << ' ' << kBundleFormatVersion << '\n';
  body << "omega " << b.omega << '\n';
  body << "classes";
  for (const auto& t : b.templates) body << ' ' << class_name(t.cls);
  body << '\n';
  body << "trim_epsilon " << format_double(b.normalization.trim_epsilon) << '\n';
  body << "capture_rate " << format_double(b.normalization.capture_rate) << '\n';
  body << "syllable_duration " << format_double(b.normalization.syllable_duration) << '\n';
  body << "alpha_dark " << format_double(b.dark.alpha_dark) << '\n';
  body << "dark_aggregation " << aggregation_name(b.dark.aggregation) << '\n';
  body << "alpha_dist " << format_double(b.classifier.alpha_dist) << '\n';
  body << "scorer " << scorer_name(b.classifier.scorer_mode) << '\n';
  body << "learning_rate " << format_double(b.classifier.learning_rate) << '\n';
  body << "epochs " << b.classifier.epochs << '\n';
  for (const auto& c : b.classifier.C) {
    body << "weights " << class_name(c.cls);
    for (double w : c.weights) body << ' ' << format_double(w);
    body << '\n';
  }
  for (const auto& t : b.templates) {
    for (auto id : kFeatures) {
      body << "template " << class_name(t.cls) << ' ' << feature_name(id) << ' ' << t.sample_count;
      for (double v : t[id]) body << ' ' << format_double(v);
      body << '\n';
    }
  }
  for (const auto& row : b.units) {
    for (const auto& u : row) {
      body << "unit " << class_name(u.cls) << ' ' << feature_name(u.feature) << ' ' << format_double(u.bias);
      for (double w : u.weights) body << ' ' << format_double(w);
      body << '\n';
    }
  }
  const std::string s = body.str();
  out << s << "checksum " << hex64(text::fnv1a(s)) << '\n';
}

ModelBundle read_bundle(std::istream& in) {
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string all = buf.str();

  const std::size_t cpos = all.rfind("checksum ");
  if (cpos == std::string::npos || (cpos > 0 && all[cpos - 1] != '\n')) corrupted("missing checksum");
  const std::string body = all.substr(0, cpos);
  if (text::trim(all.substr(cpos + 9)) != hex64(text::fnv1a(body))) corrupted("checksum mismatch");

  std::istringstream lines(body);
  std::string line;
  if (!std::getline(lines, line)) corrupted("empty file");
  {
    const auto head = text::split_ws(line);
    if (head.size() != 2 || head[0] != kMagic) corrupted("bad header");
    if (text::parse_int(head[1]) != kBundleFormatVersion) {
      throw Error("unsupported model bundle version " + head[1] + " (expected " +
                  std::to_string(kBundleFormatVersion) + ")");
    }
  }

  ModelBundle b;
  b.classifier.C.clear();
  std::map<std::string, bool> seen;
  while (std::getline(lines, line)) {
    const auto tok = text::split_ws(line);
    if (tok.empty()) continue;
    const std::string& key = tok[0];
    auto need = [&](std::size_t n) {
      if (tok.size() < n) corrupted("short line: " + key);
    };
    if (key == "omega") {
      need(2);
      b.omega = text::parse_int(tok[1]);
      if (b.omega < 2) corrupted("invalid omega");
    } else if (key == "classes") {
      for (std::size_t k = 1; k < tok.size(); ++k) {
        VisemeTemplate t;
        t.cls = parse_class(tok[k]);
        b.templates.push_back(t);
      }
      b.units.assign(b.templates.size(), {});
    } else if (key == "trim_epsilon") {
      need(2);
      b.normalization.trim_epsilon = text::parse_double(tok[1]);
    } else if (key == "capture_rate") {
      need(2);
      b.normalization.capture_rate = text::parse_double(tok[1]);
    } else if (key == "syllable_duration") {
      need(2);
      b.normalization.syllable_duration = text::parse_double(tok[1]);
    } else if (key == "alpha_dark") {
      need(2);
      b.dark.alpha_dark = text::parse_double(tok[1]);
    } else if (key == "dark_aggregation") {
      need(2);
      b.dark.aggregation = tok[1] == "mean" ? DarkAggregation::Mean : DarkAggregation::Sum;
    } else if (key == "alpha_dist") {
      need(2);
      b.classifier.alpha_dist = text::parse_double(tok[1]);
    } else if (key == "scorer") {
      need(2);
      b.classifier.scorer_mode = tok[1] == "uniform" ? ScorerMode::Uniform : ScorerMode::Trained;
    } else if (key == "learning_rate") {
      need(2);
      b.classifier.learning_rate = text::parse_double(tok[1]);
    } else if (key == "epochs") {
      need(2);
      b.classifier.epochs = text::parse_int(tok[1]);
    } else if (key == "weights") {
      need(5);
      ClassWeights c;
      c.cls = parse_class(tok[1]);
      for (int i = 0; i < 3; ++i) c.weights[i] = text::parse_double(tok[2 + i]);
      b.classifier.C.push_back(c);
    } else if (key == "template") {
      need(4);
      auto& t = b.templates[class_slot(b, parse_class(tok[1]))];
      const FeatureId id = parse_feature(tok[2]);
      t.sample_count = text::parse_int(tok[3]);
      auto& curve = t.curves[static_cast<int>(id)];
      curve.clear();
      for (std::size_t k = 4; k < tok.size(); ++k) curve.push_back(text::parse_double(tok[k]));
      if (static_cast<int>(curve.size()) != b.omega) corrupted("template length differs from omega");
      seen["template " + tok[1] + " " + tok[2]] = true;
    } else if (key == "unit") {
      need(4);
      const VisemeClass cls = parse_class(tok[1]);
      const FeatureId id = parse_feature(tok[2]);
      NeuralUnit& u = b.units[class_slot(b, cls)][static_cast<int>(id)];
      u.cls = cls;
      u.feature = id;
      u.bias = text::parse_double(tok[3]);
      u.weights.clear();
      for (std::size_t k = 4; k < tok.size(); ++k) u.weights.push_back(text::parse_double(tok[k]));
      if (static_cast<int>(u.weights.size()) != b.omega) corrupted("unit length differs from omega");
      seen["unit " + tok[1] + " " + tok[2]] = true;
    } else {
      corrupted("unknown record '" + key + "'");
    }
  }
  if (b.templates.empty()) corrupted("no classes");
  for (const auto& t : b.templates) {
    for (auto id : kFeatures) {
      const std::string suffix = std::string(class_name(t.cls)) + " " + feature_name(id);
      if (!seen.count("template " + suffix) || !seen.count("unit " + suffix)) corrupted("missing rows for " + suffix);
    }
  }
  b.normalization.omega = b.omega;
  return b;
}

void save_bundle(const ModelBundle& b, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write model bundle: " + path.string());
  write_bundle(b, out);
  if (!out) throw Error("failed writing model bundle: " + path.string());
}

ModelBundle load_bundle(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open model bundle: " + path.string());
  return read_bundle(in);
}

void check_compatible(const ModelBundle& b, const NormalizationParams& run) {
  if (b.omega != run.omega) {
    throw Error("omega mismatch: model bundle built with omega=" + std::to_string(b.omega) +
                ", run configured with omega=" + std::to_string(run.omega));
  }
}

}  // namespace alife
