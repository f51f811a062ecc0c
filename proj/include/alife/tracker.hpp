#pragma once

#include <array>
#include <vector>

#include "alife/imaging.hpp"
#include "alife/snake.hpp"

namespace alife {

struct TrackerParams {
  int w = 11;  ///< block size, odd
  int R = 10;  ///< candidate steps per direction
  bool include_stationary = true;

  void validate() const;
};

struct FreemanDirection {
  int code;
  int dx;
  int dy;
};

/// Freeman chain-code directions, image coordinates (y grows downward):
/// 0 E, 1 NE, 2 N, 3 NW, 4 W, 5 SW, 6 S, 7 SE.
inline constexpr std::array<FreemanDirection, 8> kFreeman = {{
    {0, 1, 0}, {1, 1, -1}, {2, 0, -1}, {3, -1, -1}, {4, -1, 0}, {5, -1, 1}, {6, 0, 1}, {7, 1, 1},
}};

/// direction == -1 and step == 0 denote the stationary candidate.
struct Candidate {
  int direction = -1;
  int step = 0;
  PixelPoint center;
};

std::vector<Candidate> generate_candidates(PixelPoint p, const TrackerParams& params, int width, int height);

std::vector<float> pixel_distances(const Block& model, const Block& candidate);

/// One row of w*w per-pixel luminance distances per candidate, plus the
/// vote tally filled in by vote().
struct Accumulator {
  PixelPoint origin;
  std::vector<Candidate> candidates;
  std::vector<std::vector<float>> distances;
  std::vector<int> votes;
};

Accumulator build_accumulator(const Block& model, const Frame& search, PixelPoint origin,
                              const std::vector<Candidate>& candidates);

/// Per pixel position, every candidate attaining the minimum distance gets
/// one vote; the most-voted candidate wins. Vote ties go to the smaller
/// summed distance, then the smaller displacement, then the lower index.
std::size_t vote(Accumulator& acc);

struct PoiMove {
  int direction = -1;
  int step = 0;
  int votes = 0;
  int margin = 0;  ///< winner votes minus runner-up votes
};

struct TrackResult {
  std::vector<PoiSet> frames;
  std::vector<std::array<PoiMove, 4>> moves;  ///< moves[0] is the seed frame (all zero)
};

TrackResult track_sequence(const std::vector<Frame>& frames, const PoiSet& seed, const TrackerParams& params);

enum class MatchMethod { Ssd, Ncc };

/// Same candidate lattice as track_sequence; the winner minimises the block
/// SSD or maximises the zero-mean normalised cross-correlation. No voting.
TrackResult track_sequence_baseline(const std::vector<Frame>& frames, const PoiSet& seed, const TrackerParams& params,
                                    MatchMethod method);

double block_ssd(const Block& a, const Block& b);
double block_ncc(const Block& a, const Block& b);

}  // namespace alife
