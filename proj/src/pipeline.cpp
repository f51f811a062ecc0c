#include "alife/pipeline.hpp"

#include <algorithm>
#include <fstream>

#include "alife/error.hpp"
#include "text.hpp"

namespace alife {

TrackMethod parse_track_method(const std::string& s) {
  if (s == "vote") return TrackMethod::Vote;
  if (s == "ssd") return TrackMethod::Ssd;
  if (s == "ncc") return TrackMethod::Ncc;
  throw Error("unknown tracking method: " + s + " (expected vote, ssd or ncc)");
}

void PipelineConfig::validate() const {
  snake.validate();
  tracker.validate();
  dark.validate();
  normalization.validate();
  classifier.validate();
  if (!(init.rx > 0.0) || !(init.ry > 0.0)) throw Error("initial ellipse axes must be positive");
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) throw Error("split must lie in (0, 1)");
}

namespace {

bool parse_bool(const std::string& v) {
  if (v == "1" || v == "true" || v == "on" || v == "yes") return true;
  if (v == "0" || v == "false" || v == "off" || v == "no") return false;
  throw Error("invalid boolean: " + v);
}

}  // namespace

void PipelineConfig::set(const std::string& key, const std::string& raw) {
  using text::parse_double;
  using text::parse_int;
  const std::string v = text::trim(raw);
  if (key == "snake.n") snake.n = parse_int(v);
  else if (key == "snake.a") snake.a = parse_double(v);
  else if (key == "snake.b") snake.b = parse_double(v);
  else if (key == "snake.c_cont") snake.c_cont = parse_double(v);
  else if (key == "snake.neighborhood") snake.neighborhood = parse_int(v);
  else if (key == "snake.max_iterations") snake.max_iterations = parse_int(v);
  else if (key == "init.cx") init.cx = parse_double(v);
  else if (key == "init.cy") init.cy = parse_double(v);
  else if (key == "init.rx") init.rx = parse_double(v);
  else if (key == "init.ry") init.ry = parse_double(v);
  else if (key == "presmooth") presmooth = parse_bool(v);
  else if (key == "tracker.w") tracker.w = parse_int(v);
  else if (key == "tracker.R") tracker.R = parse_int(v);
  else if (key == "tracker.stationary") tracker.include_stationary = parse_bool(v);
  else if (key == "tracker.method") track_method = parse_track_method(v);
  else if (key == "dark.alpha") dark.alpha_dark = parse_double(v);
  else if (key == "dark.aggregation") {
    if (v != "sum" && v != "mean") throw Error("dark.aggregation must be sum or mean");
    dark.aggregation = v == "sum" ? DarkAggregation::Sum : DarkAggregation::Mean;
  } else if (key == "omega") normalization.omega = parse_int(v);
  else if (key == "trim_epsilon") normalization.trim_epsilon = parse_double(v);
  else if (key == "fps") {
    normalization.capture_rate = parse_double(v);
    normalization.omega = derive_omega(normalization.capture_rate, normalization.syllable_duration);
  } else if (key == "duration") {
    normalization.syllable_duration = parse_double(v);
    normalization.omega = derive_omega(normalization.capture_rate, normalization.syllable_duration);
  } else if (key == "alpha_dist") classifier.alpha_dist = parse_double(v);
  else if (key == "scorer") {
    if (v != "trained" && v != "uniform") throw Error("scorer must be trained or uniform");
    classifier.scorer_mode = v == "trained" ? ScorerMode::Trained : ScorerMode::Uniform;
  } else if (key == "learning_rate") classifier.learning_rate = parse_double(v);
  else if (key == "epochs") classifier.epochs = parse_int(v);
  else if (key.rfind("C.", 0) == 0) {
    ClassWeights c;
    c.cls = parse_class(key.substr(2));
    const auto parts = text::split(v, ',');
    if (parts.size() != 3) throw Error("C." + key.substr(2) + " needs three comma-separated weights");
    for (int i = 0; i < 3; ++i) c.weights[i] = parse_double(parts[i]);
    std::erase_if(classifier.C, [&](const ClassWeights& w) { return w.cls == c.cls; });
    classifier.C.push_back(c);
  } else if (key == "split") train_fraction = parse_double(v);
  else if (key == "seed") seed = static_cast<std::uint64_t>(std::stoull(v));
  else throw Error("unknown configuration key: " + key);
}

PipelineConfig PipelineConfig::from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config file: " + path.string());
  PipelineConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = text::trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw Error(path.string() + ":" + std::to_string(lineno) + ": expected key=value");
    }
    cfg.set(text::trim(t.substr(0, eq)), t.substr(eq + 1));
  }
  return cfg;
}

Localization localize(const Frame& first, const PipelineConfig& cfg) {
  cfg.snake.validate();
  const double cx = cfg.init.cx < 0 ? (first.width() - 1) / 2.0 : cfg.init.cx;
  const double cy = cfg.init.cy < 0 ? (first.height() - 1) / 2.0 : cfg.init.cy;
  Localization loc;
  loc.initial = ellipse_contour(cx, cy, cfg.init.rx, cfg.init.ry, cfg.snake.n, first.width(), first.height());
  const GradientMap grad = gradient_map(cfg.presmooth ? median3(first) : first);
  loc.contour = minimize(grad, loc.initial, cfg.snake);
  loc.pois = extract_pois(loc.contour);
  return loc;
}

TrackResult track(const std::vector<Frame>& frames, const PoiSet& seed, const PipelineConfig& cfg) {
  switch (cfg.track_method) {
    case TrackMethod::Vote: return track_sequence(frames, seed, cfg.tracker);
    case TrackMethod::Ssd: return track_sequence_baseline(frames, seed, cfg.tracker, MatchMethod::Ssd);
    case TrackMethod::Ncc: return track_sequence_baseline(frames, seed, cfg.tracker, MatchMethod::Ncc);
  }
  throw Error("unknown tracking method");
}

UtteranceAnalysis analyze(const std::vector<Frame>& frames, const PipelineConfig& cfg) {
  if (frames.empty()) throw Error("empty sequence");
  UtteranceAnalysis a;
  a.localization = localize(frames.front(), cfg);
  a.track = track(frames, a.localization.pois, cfg);
  a.features = extract_track(frames, a.track, cfg.dark, cfg.normalization.capture_rate);
  a.normalized = normalize_track(a.features, cfg.normalization);
  return a;
}

ModelBundle train_bundle(std::span<const LabeledUtterance> training, const PipelineConfig& cfg) {
  cfg.validate();
  if (training.empty()) throw Error("empty training set");
  std::vector<VisemeClass> present;
  for (auto c : kVisemeClasses) {
    if (std::any_of(training.begin(), training.end(), [&](const LabeledUtterance& u) { return u.cls == c; })) {
      present.push_back(c);
    }
  }
  if (present.size() < 2) throw Error("need at least 2 classes");

  ModelBundle b;
  b.omega = cfg.normalization.omega;
  b.normalization = cfg.normalization;
  b.dark = cfg.dark;
  b.classifier = cfg.classifier;
  for (auto c : present) {
    std::vector<NormalizedUtterance> curves;
    for (const auto& u : training) {
      if (u.cls != c) continue;
      if (u.curves.omega() != b.omega) throw Error("omega mismatch in training curves");
      curves.push_back(u.curves);
    }
    b.templates.push_back(build_template(c, curves));
  }
  b.units = train_units(training, b.templates, b.classifier);
  return b;
}

}  // namespace alife
