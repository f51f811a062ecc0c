#include "alife/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <random>
#include <sstream>

#include "alife/error.hpp"
#include "text.hpp"

namespace fs = std::filesystem;

namespace alife {

namespace {

/// Portable uniform draws on top of mt19937_64 (the standard distributions
/// are implementation-defined).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  std::uint64_t below(std::uint64_t n) { return gen_() % n; }
  std::uint64_t next() { return gen_(); }

 private:
  std::mt19937_64 gen_;
};

constexpr int kSupersample = 4;

}  // namespace

ArticulationProfile ArticulationProfile::canonical(VisemeClass cls) {
  ArticulationProfile a;
  switch (cls) {
    case VisemeClass::BA:  // opening: the jaw drops the lower lip
      a.d_half_span = 4.0;
      a.d_open_up = 3.0;
      a.d_open_low = 7.0;
      break;
    case VisemeClass::BI:  // stretch: corners pulled apart, small opening
      a.d_half_span = 8.0;
      a.d_open_up = 1.75;
      a.d_open_low = 4.25;
      a.d_inner_ratio = 0.1;
      break;
    case VisemeClass::BOU:  // forward movement: corners drawn in, round opening
      a.d_half_span = -7.0;
      a.d_open_up = 2.5;
      a.d_open_low = 3.5;
      a.d_inner_ratio = -0.2;
      break;
  }
  return a;
}

void SyntheticUtteranceSpec::validate() const {
  if (frames < 2) throw Error("synthetic utterance needs at least 2 frames");
  if (!(fps > 0.0)) throw Error("fps must be positive");
  if (noise.impulse_fraction < 0.0 || noise.impulse_fraction > 0.5) throw Error("impulse fraction must lie in [0, 0.5]");
  if (articulation.end <= articulation.start) throw Error("articulation span must be non-empty");
  for (float v : {skin, lip, interior}) {
    if (v < 0.0f || v > 255.0f) throw Error("synthetic luminance out of range");
  }
  for (int t = 0; t < frames; ++t) {
    const MouthPose p = mouth_pose(*this, t);
    if (p.left < 1 || p.right > width - 2 || p.top < 1 || p.bottom > height - 2) {
      throw Error("synthetic mouth geometry exceeds frame bounds at frame " + std::to_string(t));
    }
    if (p.right - p.left < 4 || p.inner_half_width >= 0.5 * (p.right - p.left)) {
      throw Error("synthetic mouth geometry is degenerate at frame " + std::to_string(t));
    }
  }
}

SyntheticUtteranceSpec SyntheticUtteranceSpec::canonical(VisemeClass cls) {
  SyntheticUtteranceSpec s;
  s.cls = cls;
  s.articulation = ArticulationProfile::canonical(cls);
  return s;
}

bool MouthPose::in_interior(double x, double y) const {
  const double b = y <= mid_y ? open_up : open_low;
  if (b <= 0.0 || inner_half_width <= 0.0) return false;
  const double u = (x - center_x()) / inner_half_width;
  const double v = (y - mid_y) / b;
  return u * u + v * v < 1.0;
}

PoiSet MouthPose::pois() const {
  PoiSet p;
  const int xc = static_cast<int>(std::lround(center_x()));
  p.left_corner = {left, mid_y};
  p.right_corner = {right, mid_y};
  p.upper_center = {xc, top};
  p.lower_center = {xc, bottom};
  return p;
}

MouthPose mouth_pose(const SyntheticUtteranceSpec& spec, int t) {
  const auto& m = spec.mouth;
  const auto& a = spec.articulation;
  const double p = std::clamp(static_cast<double>(t - a.start) / (a.end - a.start), 0.0, 1.0);
  const double half_span = m.half_span + a.d_half_span * p;
  const double open_up = m.open_up + a.d_open_up * p;
  const double open_low = m.open_low + a.d_open_low * p;
  const double upper = m.upper_thickness + open_up;
  const double lower = m.lower_thickness + open_low;

  MouthPose pose;
  // The outer extents are quantised so that the corner distance and the
  // vertical distance are each within half a pixel of the analytic profile.
  pose.left = static_cast<int>(std::lround(m.cx - half_span));
  pose.right = pose.left + static_cast<int>(std::lround(2.0 * half_span));
  pose.mid_y = static_cast<int>(std::lround(m.cy));
  pose.top = pose.mid_y - static_cast<int>(std::lround(upper));
  pose.bottom = pose.top + static_cast<int>(std::lround(upper + lower));
  pose.open_up = open_up;
  pose.open_low = open_low;
  pose.inner_half_width = (m.inner_ratio + a.d_inner_ratio * p) * 0.5 * (pose.right - pose.left);
  return pose;
}

namespace {

bool in_outer(const MouthPose& p, double x, double y) {
  const double a = 0.5 * (p.right - p.left);
  const double b = y <= p.mid_y ? p.mid_y - p.top : p.bottom - p.mid_y;
  const double u = (x - p.center_x()) / a;
  const double v = (y - p.mid_y) / b;
  return u * u + v * v <= 1.0;
}

Frame render(const SyntheticUtteranceSpec& spec, const MouthPose& pose, std::vector<std::uint8_t>& mask) {
  std::vector<float> px(static_cast<std::size_t>(spec.width) * spec.height, spec.skin);
  mask.assign(px.size(), 0);
  const int x0 = std::max(0, pose.left - 2), x1 = std::min(spec.width - 1, pose.right + 2);
  const int y0 = std::max(0, pose.top - 2), y1 = std::min(spec.height - 1, pose.bottom + 2);
  for (int y = y0; y <= y1; ++y) {
    for (int x = x0; x <= x1; ++x) {
      const std::size_t idx = static_cast<std::size_t>(y) * spec.width + x;
      if (pose.in_interior(x, y)) {
        px[idx] = spec.interior;
        mask[idx] = 1;
        continue;
      }
      int covered = 0;
      for (int sy = 0; sy < kSupersample; ++sy) {
        for (int sx = 0; sx < kSupersample; ++sx) {
          const double ox = (sx + 0.5) / kSupersample - 0.5;
          const double oy = (sy + 0.5) / kSupersample - 0.5;
          covered += in_outer(pose, x + ox, y + oy) ? 1 : 0;
        }
      }
      const double c = static_cast<double>(covered) / (kSupersample * kSupersample);
      px[idx] = static_cast<float>(spec.skin + (spec.lip - spec.skin) * c);
    }
  }
  return Frame(spec.width, spec.height, std::move(px));
}

void apply_noise(std::vector<float>& px, const NoiseSpec& n, double offset, Rng& rng) {
  for (float& v : px) {
    double x = std::clamp(static_cast<double>(v) + offset, 0.0, 255.0);
    if (n.impulse_fraction > 0.0 && rng.uniform() < n.impulse_fraction) x = rng.uniform() < 0.5 ? 0.0 : 255.0;
    v = static_cast<float>(std::round(x));
  }
}

}  // namespace

SyntheticUtterance synthesize(const SyntheticUtteranceSpec& spec) {
  spec.validate();
  Rng rng(spec.rng_seed);
  const double phase = rng.uniform(0.0, 2.0 * M_PI);
  SyntheticUtterance u;
  u.truth.cls = spec.cls;
  u.truth.active_start = spec.articulation.start;
  u.truth.active_end = spec.articulation.end;
  for (int t = 0; t < spec.frames; ++t) {
    const MouthPose pose = mouth_pose(spec, t);
    std::vector<std::uint8_t> mask;
    const Frame clean = render(spec, pose, mask);
    double offset = spec.noise.drift_amplitude * std::sin(2.0 * M_PI * t / spec.noise.drift_period + phase);
    if (t % 2 == 1) offset += spec.noise.alternate_offset;
    std::vector<float> px(clean.pixels().begin(), clean.pixels().end());
    apply_noise(px, spec.noise, offset, rng);
    u.frames.emplace_back(spec.width, spec.height, std::move(px));
    u.truth.poses.push_back(pose);
    u.truth.pois.push_back(pose.pois());
    u.truth.dark_masks.push_back(std::move(mask));
  }
  return u;
}

SyntheticUtteranceSpec speaker_variant(VisemeClass cls, std::uint64_t seed, const NoiseSpec& noise) {
  Rng rng(seed * 0x9e3779b97f4a7c15ULL + static_cast<std::uint64_t>(cls) + 1);
  SyntheticUtteranceSpec s = SyntheticUtteranceSpec::canonical(cls);
  s.noise = noise;
  s.mouth.cx = 80.0 + rng.uniform(-3.0, 3.0);
  s.mouth.cy = 60.0 + rng.uniform(-3.0, 3.0);
  s.mouth.half_span = rng.uniform(25.0, 31.0);
  s.mouth.upper_thickness = rng.uniform(6.0, 8.0);
  s.mouth.lower_thickness = rng.uniform(8.0, 10.0);
  s.mouth.inner_ratio = rng.uniform(0.65, 0.75);
  // Overall effort, then a per-gesture style factor.
  const double effort = rng.uniform(0.75, 1.25);
  s.articulation.d_half_span *= effort * rng.uniform(0.75, 1.25);
  s.articulation.d_open_up *= effort * rng.uniform(0.75, 1.25);
  s.articulation.d_open_low *= effort * rng.uniform(0.75, 1.25);
  s.articulation.d_inner_ratio *= effort * rng.uniform(0.75, 1.25);
  s.articulation.start = 5 + static_cast<int>(rng.below(4));
  s.articulation.end = s.articulation.start + 15 + static_cast<int>(rng.below(5));
  s.skin = static_cast<float>(std::round(rng.uniform(175.0, 205.0)));
  s.lip = static_cast<float>(std::round(rng.uniform(105.0, 135.0)));
  s.interior = static_cast<float>(std::round(rng.uniform(4.0, 12.0)));
  s.rng_seed = rng.next();
  return s;
}

TranslationSequence synthesize_translation(int width, int height, const std::vector<PixelPoint>& steps,
                                           double impulse_fraction, std::uint64_t seed) {
  Rng rng(seed);
  TranslationSequence seq;
  seq.offsets.push_back({0, 0});
  int margin = 0;
  for (const auto& s : steps) {
    const PixelPoint last = seq.offsets.back();
    seq.offsets.push_back({last.x + s.x, last.y + s.y});
    margin = std::max({margin, std::abs(last.x + s.x), std::abs(last.y + s.y)});
  }
  margin += 2;
  const int cw = width + 2 * margin, ch = height + 2 * margin;
  constexpr int kCell = 6;
  const int gw = cw / kCell + 2, gh = ch / kCell + 2;
  std::vector<double> grid(static_cast<std::size_t>(gw) * gh);
  for (double& g : grid) g = rng.uniform(-1.0, 1.0);
  std::vector<float> canvas(static_cast<std::size_t>(cw) * ch);
  for (int y = 0; y < ch; ++y) {
    for (int x = 0; x < cw; ++x) {
      const double gx = static_cast<double>(x) / kCell, gy = static_cast<double>(y) / kCell;
      const int ix = static_cast<int>(gx), iy = static_cast<int>(gy);
      const double fx = gx - ix, fy = gy - iy;
      auto g = [&](int a, int b) { return grid[static_cast<std::size_t>(iy + b) * gw + ix + a]; };
      const double smooth = (1 - fx) * (1 - fy) * g(0, 0) + fx * (1 - fy) * g(1, 0) + (1 - fx) * fy * g(0, 1) +
                            fx * fy * g(1, 1);
      const double v = 128.0 + 70.0 * smooth + rng.uniform(-25.0, 25.0);
      canvas[static_cast<std::size_t>(y) * cw + x] = static_cast<float>(std::round(std::clamp(v, 0.0, 255.0)));
    }
  }
  for (const auto& off : seq.offsets) {
    std::vector<float> px(static_cast<std::size_t>(width) * height);
    for (int y = 0; y < height; ++y) {
      for (int x = 0; x < width; ++x) {
        px[static_cast<std::size_t>(y) * width + x] =
            canvas[static_cast<std::size_t>(y - off.y + margin) * cw + (x - off.x + margin)];
      }
    }
    if (impulse_fraction > 0.0) apply_noise(px, NoiseSpec{impulse_fraction}, 0.0, rng);
    seq.frames.emplace_back(width, height, std::move(px));
  }
  return seq;
}

std::vector<ManifestEntry> read_manifest(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open manifest: " + path.string());
  std::vector<ManifestEntry> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = text::trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto comma = t.find(',');
    if (comma == std::string::npos) {
      throw Error(path.string() + ":" + std::to_string(lineno) + ": expected label,path");
    }
    fs::path p(text::trim(t.substr(comma + 1)));
    out.push_back({parse_class(text::trim(t.substr(0, comma))), p.is_relative() ? path.parent_path() / p : p});
  }
  if (out.empty()) throw Error("manifest is empty: " + path.string());
  return out;
}

void write_manifest(const std::vector<ManifestEntry>& entries, const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write manifest: " + path.string());
  for (const auto& e : entries) out << class_name(e.cls) << ',' << e.path.generic_string() << '\n';
}

void write_utterance(const SyntheticUtterance& u, const fs::path& dir) {
  fs::create_directories(dir);
  std::ofstream truth(dir / "truth.csv");
  if (!truth) throw Error("cannot write ground truth in " + dir.string());
  truth << "frame,poi_name,x,y,dark_count\n";
  for (std::size_t t = 0; t < u.frames.size(); ++t) {
    std::ostringstream name;
    name << "frame_" << std::setw(3) << std::setfill('0') << t << ".pgm";
    save_pgm(u.frames[t], dir / name.str());
    const int dark = static_cast<int>(std::count(u.truth.dark_masks[t].begin(), u.truth.dark_masks[t].end(), 1));
    const auto pts = u.truth.pois[t].points();
    for (std::size_t k = 0; k < pts.size(); ++k) {
      truth << t << ',' << PoiSet::kNames[k] << ',' << pts[k].x << ',' << pts[k].y << ',' << dark << '\n';
    }
  }
}

double EvaluationReport::class_rate(std::size_t j) const {
  int row = 0;
  for (int v : confusion[j]) row += v;
  return row == 0 ? 0.0 : static_cast<double>(confusion[j][j]) / row;
}

double EvaluationReport::overall_rate() const {
  int trace = 0, total = 0;
  for (std::size_t j = 0; j < confusion.size(); ++j) {
    trace += confusion[j][j];
    for (int v : confusion[j]) total += v;
  }
  return total == 0 ? 0.0 : static_cast<double>(trace) / total;
}

std::string EvaluationReport::to_text() const {
  std::ostringstream out;
  out << std::fixed << std::setprecision(2);
  out << "Confusion matrix (rows: true class, columns: recognised class)\n";
  out << std::setw(8) << "";
  for (auto c : classes) out << std::setw(10) << class_name(c);
  out << std::setw(10) << "rate" << '\n';
  for (std::size_t j = 0; j < classes.size(); ++j) {
    int row = 0;
    for (int v : confusion[j]) row += v;
    out << std::setw(8) << class_name(classes[j]);
    for (int v : confusion[j]) out << std::setw(9) << (row ? 100.0 * v / row : 0.0) << '%';
    out << std::setw(9) << 100.0 * class_rate(j) << "%\n";
  }
  out << "Overall recognition rate: " << 100.0 * overall_rate() << "%\n";
  out << "Split (train/test):";
  for (std::size_t j = 0; j < classes.size(); ++j) {
    out << ' ' << class_name(classes[j]) << '=' << train_counts[j] << '/' << test_counts[j];
  }
  out << '\n';
  return out.str();
}

std::string EvaluationReport::to_csv() const {
  std::ostringstream out;
  out << "true_class";
  for (auto c : classes) out << ',' << class_name(c);
  out << ",train,test,rate\n";
  for (std::size_t j = 0; j < classes.size(); ++j) {
    out << class_name(classes[j]);
    for (int v : confusion[j]) out << ',' << v;
    out << ',' << train_counts[j] << ',' << test_counts[j] << ',' << text::format_double(class_rate(j)) << '\n';
  }
  out << "overall";
  for (std::size_t j = 0; j < classes.size(); ++j) out << ',';
  out << ",,," << text::format_double(overall_rate()) << '\n';
  return out.str();
}

Split stratified_split(const std::vector<VisemeClass>& labels, double train_fraction, std::uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) throw Error("split must lie in (0, 1)");
  Rng rng(seed);
  Split s;
  for (auto c : kVisemeClasses) {
    std::vector<std::size_t> idx;
    for (std::size_t k = 0; k < labels.size(); ++k) {
      if (labels[k] == c) idx.push_back(k);
    }
    if (idx.empty()) continue;
    for (std::size_t i = idx.size() - 1; i > 0; --i) std::swap(idx[i], idx[rng.below(i + 1)]);
    const auto n_train = static_cast<std::size_t>(std::lround(static_cast<double>(idx.size()) * train_fraction));
    if (n_train == 0 || n_train >= idx.size()) {
      throw Error(std::string("empty class after split: ") + class_name(c));
    }
    s.train.insert(s.train.end(), idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(n_train));
    s.test.insert(s.test.end(), idx.begin() + static_cast<std::ptrdiff_t>(n_train), idx.end());
  }
  return s;
}

}  // namespace alife
