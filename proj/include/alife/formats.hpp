#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "alife/features.hpp"
#include "alife/normalize.hpp"
#include "alife/snake.hpp"
#include "alife/tracker.hpp"

namespace alife {

// Plain-text artifacts passed between CLI stages. Every writer has a reader
// that recovers the same values.

/// `left_corner=x,y` lines, one per POI, plus free-form extra keys.
void write_pois(const PoiSet& pois, std::ostream& out);
PoiSet read_pois(std::istream& in);
PoiSet parse_point_list(const std::string& left, const std::string& right, const std::string& upper,
                        const std::string& lower);

/// frame,poi_name,x,y,votes,margin
void write_track_csv(const TrackResult& t, std::ostream& out);
TrackResult read_track_csv(std::istream& in);

/// frame,dh,dv,da,dark_count,s_dark
void write_features_csv(const FeatureTrack& t, std::ostream& out);
FeatureTrack read_features_csv(std::istream& in, double fps);

/// feature_id,v0..v{omega-1},scale_basis,retained_range,speech_detected
void write_normalized_csv(const NormalizedUtterance& u, std::ostream& out);
NormalizedUtterance read_normalized_csv(std::istream& in);

std::string read_text_file(const std::filesystem::path& path);

}  // namespace alife
