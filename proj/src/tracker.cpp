#include "alife/tracker.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "alife/error.hpp"

namespace alife {

void TrackerParams::validate() const {
  if (w < 3 || w % 2 == 0) throw Error("tracker block size must be odd and >= 3");
  if (R < 1) throw Error("tracker R must be >= 1");
}

std::vector<Candidate> generate_candidates(PixelPoint p, const TrackerParams& params, int width, int height) {
  params.validate();
  std::vector<Candidate> out;
  std::set<PixelPoint> seen;
  if (params.include_stationary) {
    out.push_back({-1, 0, p});
    seen.insert(p);
  }
  for (const auto& dir : kFreeman) {
    for (int r = 1; r <= params.R; ++r) {
      const PixelPoint c{std::clamp(p.x + r * dir.dx, 0, width - 1), std::clamp(p.y + r * dir.dy, 0, height - 1)};
      if (seen.insert(c).second) out.push_back({dir.code, r, c});
    }
  }
  return out;
}

std::vector<float> pixel_distances(const Block& model, const Block& candidate) {
  if (model.size != candidate.size || model.pixels.size() != candidate.pixels.size()) {
    throw Error("block size mismatch");
  }
  std::vector<float> d(model.pixels.size());
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = std::abs(candidate.pixels[i] - model.pixels[i]);
  return d;
}

Accumulator build_accumulator(const Block& model, const Frame& search, PixelPoint origin,
                              const std::vector<Candidate>& candidates) {
  Accumulator acc;
  acc.origin = origin;
  acc.candidates = candidates;
  acc.distances.reserve(candidates.size());
  for (const auto& c : candidates) {
    acc.distances.push_back(pixel_distances(model, extract_block(search, c.center, model.size)));
  }
  return acc;
}

namespace {

double displacement(const Candidate& c, PixelPoint origin) {
  return std::hypot(c.center.x - origin.x, c.center.y - origin.y);
}

int runner_up_margin(const std::vector<int>& votes, std::size_t winner) {
  int second = 0;
  for (std::size_t j = 0; j < votes.size(); ++j) {
    if (j != winner) second = std::max(second, votes[j]);
  }
  return votes[winner] - second;
}

}  // namespace

std::size_t vote(Accumulator& acc) {
  const std::size_t n = acc.distances.size();
  if (n == 0) throw Error("empty accumulator");
  const std::size_t cells = acc.distances.front().size();
  for (const auto& row : acc.distances) {
    if (row.size() != cells) throw Error("ragged accumulator rows");
  }
  acc.votes.assign(n, 0);
  for (std::size_t i = 0; i < cells; ++i) {
    float best = acc.distances[0][i];
    for (std::size_t j = 1; j < n; ++j) best = std::min(best, acc.distances[j][i]);
    for (std::size_t j = 0; j < n; ++j) {
      if (acc.distances[j][i] == best) ++acc.votes[j];
    }
  }

  std::vector<double> totals(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    for (float d : acc.distances[j]) totals[j] += d;
  }
  std::size_t winner = 0;
  for (std::size_t j = 1; j < n; ++j) {
    if (acc.votes[j] != acc.votes[winner]) {
      if (acc.votes[j] > acc.votes[winner]) winner = j;
      continue;
    }
    if (totals[j] != totals[winner]) {
      if (totals[j] < totals[winner]) winner = j;
      continue;
    }
    if (displacement(acc.candidates[j], acc.origin) < displacement(acc.candidates[winner], acc.origin)) winner = j;
  }
  return winner;
}

double block_ssd(const Block& a, const Block& b) {
  if (a.pixels.size() != b.pixels.size()) throw Error("block size mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.pixels.size(); ++i) {
    const double d = static_cast<double>(a.pixels[i]) - b.pixels[i];
    s += d * d;
  }
  return s;
}

double block_ncc(const Block& a, const Block& b) {
  if (a.pixels.size() != b.pixels.size()) throw Error("block size mismatch");
  const double n = static_cast<double>(a.pixels.size());
  double ma = 0.0, mb = 0.0;
  for (std::size_t i = 0; i < a.pixels.size(); ++i) {
    ma += a.pixels[i];
    mb += b.pixels[i];
  }
  ma /= n;
  mb /= n;
  double num = 0.0, va = 0.0, vb = 0.0;
  for (std::size_t i = 0; i < a.pixels.size(); ++i) {
    const double da = a.pixels[i] - ma;
    const double db = b.pixels[i] - mb;
    num += da * db;
    va += da * da;
    vb += db * db;
  }
  if (va == 0.0 || vb == 0.0) return va == vb ? 1.0 : 0.0;
  return num / std::sqrt(va * vb);
}

namespace {

void check_inputs(const std::vector<Frame>& frames, const PoiSet& seed, const TrackerParams& params) {
  params.validate();
  if (frames.size() < 2) throw Error("tracking needs at least 2 frames");
  for (const auto& p : seed.points()) {
    if (!frames.front().contains(p)) throw Error("seed POI outside the first frame");
  }
}

template <typename Select>
TrackResult run_tracker(const std::vector<Frame>& frames, const PoiSet& seed, const TrackerParams& params,
                        Select select) {
  check_inputs(frames, seed, params);
  TrackResult result;
  result.frames.reserve(frames.size());
  result.moves.reserve(frames.size());
  result.frames.push_back(seed);
  result.moves.push_back({});
  PoiSet current = seed;
  for (std::size_t t = 1; t < frames.size(); ++t) {
    std::array<PoiMove, 4> moves{};
    const auto pts = current.points();
    for (std::size_t k = 0; k < pts.size(); ++k) {
      const Block model = extract_block(frames[t - 1], pts[k], params.w);
      const auto candidates = generate_candidates(pts[k], params, frames[t].width(), frames[t].height());
      const auto [winner, move] = select(model, frames[t], pts[k], candidates);
      moves[k] = move;
      current.set(k, candidates[winner].center);
    }
    // The bow triple is a first-frame annotation only.
    current.cupid_bow.reset();
    result.frames.push_back(current);
    result.moves.push_back(moves);
  }
  return result;
}

}  // namespace

TrackResult track_sequence(const std::vector<Frame>& frames, const PoiSet& seed, const TrackerParams& params) {
  return run_tracker(frames, seed, params,
                     [](const Block& model, const Frame& search, PixelPoint origin, const std::vector<Candidate>& cands) {
                       Accumulator acc = build_accumulator(model, search, origin, cands);
                       const std::size_t w = vote(acc);
                       const PoiMove m{cands[w].direction, cands[w].step, acc.votes[w], runner_up_margin(acc.votes, w)};
                       return std::pair{w, m};
                     });
}

TrackResult track_sequence_baseline(const std::vector<Frame>& frames, const PoiSet& seed, const TrackerParams& params,
                                    MatchMethod method) {
  return run_tracker(frames, seed, params,
                     [method](const Block& model, const Frame& search, PixelPoint origin,
                              const std::vector<Candidate>& cands) {
                       // Lower cost is better; NCC is negated.
                       std::size_t best = 0;
                       double best_cost = std::numeric_limits<double>::infinity();
                       for (std::size_t j = 0; j < cands.size(); ++j) {
                         const Block b = extract_block(search, cands[j].center, model.size);
                         const double cost = method == MatchMethod::Ssd ? block_ssd(model, b) : -block_ncc(model, b);
                         if (cost < best_cost ||
                             (cost == best_cost && displacement(cands[j], origin) < displacement(cands[best], origin))) {
                           best = j;
                           best_cost = cost;
                         }
                       }
                       return std::pair{best, PoiMove{cands[best].direction, cands[best].step, 0, 0}};
                     });
}

}  // namespace alife
