#include "alife/formats.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include "alife/error.hpp"
#include "text.hpp"

namespace alife {

namespace {

PixelPoint parse_point(const std::string& s) {
  const auto parts = text::split(s, ',');
  if (parts.size() != 2) throw Error("expected a point as x,y: '" + s + "'");
  return {text::parse_int(text::trim(parts[0])), text::parse_int(text::trim(parts[1]))};
}

int poi_index(const std::string& name) {
  for (std::size_t k = 0; k < PoiSet::kNames.size(); ++k) {
    if (name == PoiSet::kNames[k]) return static_cast<int>(k);
  }
  throw Error("unknown POI name: " + name);
}

/// Lines after the header, split on commas; blank lines skipped.
std::vector<std::vector<std::string>> csv_rows(std::istream& in, const std::string& what) {
  std::string line;
  if (!std::getline(in, line)) throw Error("empty " + what + " CSV");
  std::vector<std::vector<std::string>> rows;
  while (std::getline(in, line)) {
    const std::string t = text::trim(line);
    if (t.empty()) continue;
    auto cells = text::split(t, ',');
    for (auto& c : cells) c = text::trim(c);
    rows.push_back(std::move(cells));
  }
  return rows;
}

}  // namespace

void write_pois(const PoiSet& pois, std::ostream& out) {
  const auto pts = pois.points();
  for (std::size_t k = 0; k < pts.size(); ++k) out << PoiSet::kNames[k] << '=' << pts[k].x << ',' << pts[k].y << '\n';
}

PoiSet read_pois(std::istream& in) {
  PoiSet p;
  std::array<bool, 4> seen{};
  std::string line;
  while (std::getline(in, line)) {
    const std::string t = text::trim(line);
    const auto eq = t.find('=');
    if (t.empty() || t.front() == '#' || eq == std::string::npos) continue;
    const std::string key = text::trim(t.substr(0, eq));
    for (std::size_t k = 0; k < PoiSet::kNames.size(); ++k) {
      if (key == PoiSet::kNames[k]) {
        p.set(k, parse_point(text::trim(t.substr(eq + 1))));
        seen[k] = true;
      }
    }
  }
  for (std::size_t k = 0; k < seen.size(); ++k) {
    if (!seen[k]) throw Error(std::string("POI file lacks ") + PoiSet::kNames[k]);
  }
  return p;
}

PoiSet parse_point_list(const std::string& left, const std::string& right, const std::string& upper,
                        const std::string& lower) {
  PoiSet p;
  p.left_corner = parse_point(left);
  p.right_corner = parse_point(right);
  p.upper_center = parse_point(upper);
  p.lower_center = parse_point(lower);
  return p;
}

void write_track_csv(const TrackResult& t, std::ostream& out) {
  out << "frame,poi_name,x,y,votes,margin\n";
  for (std::size_t f = 0; f < t.frames.size(); ++f) {
    const auto pts = t.frames[f].points();
    for (std::size_t k = 0; k < pts.size(); ++k) {
      const PoiMove m = f < t.moves.size() ? t.moves[f][k] : PoiMove{};
      out << f << ',' << PoiSet::kNames[k] << ',' << pts[k].x << ',' << pts[k].y << ',' << m.votes << ','
          << m.margin << '\n';
    }
  }
}

TrackResult read_track_csv(std::istream& in) {
  TrackResult t;
  std::map<std::size_t, std::array<bool, 4>> seen;
  for (const auto& r : csv_rows(in, "track")) {
    if (r.size() != 6) throw Error("track CSV rows need 6 columns");
    const auto f = static_cast<std::size_t>(text::parse_int(r[0]));
    const int k = poi_index(r[1]);
    if (f >= t.frames.size()) {
      t.frames.resize(f + 1);
      t.moves.resize(f + 1);
    }
    t.frames[f].set(static_cast<std::size_t>(k), {text::parse_int(r[2]), text::parse_int(r[3])});
    t.moves[f][k].votes = text::parse_int(r[4]);
    t.moves[f][k].margin = text::parse_int(r[5]);
    seen[f][k] = true;
  }
  if (t.frames.empty()) throw Error("track CSV has no rows");
  for (std::size_t f = 0; f < t.frames.size(); ++f) {
    for (bool s : seen[f]) {
      if (!s) throw Error("track CSV misses POIs for frame " + std::to_string(f));
    }
  }
  return t;
}

void write_features_csv(const FeatureTrack& t, std::ostream& out) {
  using text::format_double;
  out << "frame,dh,dv,da,dark_count,s_dark\n";
  for (std::size_t f = 0; f < t.frames.size(); ++f) {
    const auto& x = t.frames[f];
    out << f << ',' << format_double(x.dh) << ',' << format_double(x.dv) << ',' << format_double(x.da) << ','
        << x.dark_count << ',' << format_double(x.s_dark) << '\n';
  }
}

FeatureTrack read_features_csv(std::istream& in, double fps) {
  FeatureTrack t;
  t.fps = fps;
  for (const auto& r : csv_rows(in, "feature")) {
    if (r.size() != 6) throw Error("feature CSV rows need 6 columns");
    if (static_cast<std::size_t>(text::parse_int(r[0])) != t.frames.size()) throw Error("feature CSV frames out of order");
    t.frames.push_back({text::parse_double(r[1]), text::parse_double(r[2]), text::parse_double(r[3]),
                        text::parse_int(r[4]), text::parse_double(r[5])});
  }
  if (t.frames.empty()) throw Error("feature CSV has no rows");
  return t;
}

void write_normalized_csv(const NormalizedUtterance& u, std::ostream& out) {
  out << "feature_id";
  for (int w = 0; w < u.omega(); ++w) out << ",v" << w;
  out << ",scale_basis,retained_range,speech_detected\n";
  for (const auto& c : u.curves) {
    out << feature_name(c.feature);
    for (double v : c.values) out << ',' << text::format_double(v);
    out << ',' << text::format_double(c.scale_basis) << ',' << u.retained.first << ':' << u.retained.last << ','
        << (u.retained.speech_detected ? 1 : 0) << '\n';
  }
}

NormalizedUtterance read_normalized_csv(std::istream& in) {
  NormalizedUtterance u;
  std::array<bool, 3> seen{};
  for (const auto& r : csv_rows(in, "normalized")) {
    if (r.size() < 6) throw Error("normalized CSV rows need at least 6 columns");
    const FeatureId id = parse_feature(r[0]);
    auto& c = u.curves[static_cast<int>(id)];
    c.feature = id;
    for (std::size_t k = 1; k + 3 < r.size(); ++k) c.values.push_back(text::parse_double(r[k]));
    c.scale_basis = text::parse_double(r[r.size() - 3]);
    const auto range = text::split(r[r.size() - 2], ':');
    if (range.size() != 2) throw Error("retained_range must be first:last");
    u.retained.first = static_cast<std::size_t>(text::parse_int(range[0]));
    u.retained.last = static_cast<std::size_t>(text::parse_int(range[1]));
    u.retained.speech_detected = r.back() == "1";
    seen[static_cast<int>(id)] = true;
  }
  for (auto id : kFeatures) {
    if (!seen[static_cast<int>(id)]) throw Error(std::string("normalized CSV lacks ") + feature_name(id));
    if (u[id].values.size() != u.curves[0].values.size()) throw Error("normalized curves differ in length");
  }
  return u;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace alife
