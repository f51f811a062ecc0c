#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>

#include "alife/corpus.hpp"
#include "alife/error.hpp"
#include "alife/templates.hpp"
#include "helpers.hpp"

using namespace alife;

namespace {

NormalizedUtterance curves(std::vector<double> dh, std::vector<double> dv, std::vector<double> da) {
  NormalizedUtterance u;
  u.curves[0] = {FeatureId::DH, std::move(dh), 1.0};
  u.curves[1] = {FeatureId::DV, std::move(dv), 1.0};
  u.curves[2] = {FeatureId::DA, std::move(da), 1.0};
  return u;
}

std::vector<NormalizedUtterance> generator_set(VisemeClass cls, int n) {
  std::vector<NormalizedUtterance> out;
  for (int k = 0; k < n; ++k) {
    const auto u = synthesize(speaker_variant(cls, 1000 + k, NoiseSpec{}));
    FeatureTrack t;
    for (std::size_t i = 0; i < u.frames.size(); ++i) t.frames.push_back(frame_features(u.frames[i], u.truth.pois[i], DarkParams{}));
    out.push_back(normalize_track(t, NormalizationParams{}));
  }
  return out;
}

}  // namespace

TEST_CASE("template of one utterance is that utterance") {
  const auto u = curves({1, 1.5, 2}, {1, 0.5, 0.25}, {0, 1, 0.5});
  const std::vector<NormalizedUtterance> one{u};
  const auto t = build_template(VisemeClass::BI, one);
  CHECK(t.cls == VisemeClass::BI);
  CHECK(t.sample_count == 1);
  for (auto id : kFeatures) CHECK(t[id] == u[id].values);
}

TEST_CASE("two-utterance mean") {
  const std::vector<NormalizedUtterance> two{curves({1, 1}, {1, 2}, {0, 0}), curves({1, 1}, {3, 4}, {0, 1})};
  const auto t = build_template(VisemeClass::BA, two);
  CHECK(t[FeatureId::DV] == std::vector<double>{2, 3});
  CHECK(t[FeatureId::DA] == std::vector<double>{0, 0.5});
}

TEST_CASE("30 generator utterances match a columnwise mean oracle") {
  auto set = generator_set(VisemeClass::BOU, 30);
  const auto t = build_template(VisemeClass::BOU, set);
  CHECK(t.sample_count == 30);
  for (auto id : kFeatures) {
    REQUIRE(t[id].size() == 10);
    for (int w = 0; w < 10; ++w) {
      double s = 0, lo = 1e9, hi = -1e9;
      for (const auto& u : set) {
        s += u[id].values[w];
        lo = std::min(lo, u[id].values[w]);
        hi = std::max(hi, u[id].values[w]);
      }
      CHECK(std::abs(t[id][w] - s / 30) <= 1e-9);
      CHECK(t[id][w] >= lo);
      CHECK(t[id][w] <= hi);
    }
  }

  std::shuffle(set.begin(), set.end(), testutil::rng());
  CHECK(build_template(VisemeClass::BOU, set) == t);
  std::reverse(set.begin(), set.end());
  CHECK(build_template(VisemeClass::BOU, set) == t);

  auto doubled = set;
  doubled.insert(doubled.end(), set.begin(), set.end());
  const auto d = build_template(VisemeClass::BOU, doubled);
  for (auto id : kFeatures)
    for (int w = 0; w < 10; ++w) CHECK(std::abs(d[id][w] - t[id][w]) <= 1e-12);
}

TEST_CASE("template errors") {
  CHECK_THROWS_AS(build_template(VisemeClass::BA, std::vector<NormalizedUtterance>{}), Error);
  const std::vector<NormalizedUtterance> ragged{curves({1, 1}, {1, 2}, {0, 0}), curves({1, 1, 1}, {3, 4, 5}, {0, 1, 1})};
  CHECK_THROWS_WITH_AS(build_template(VisemeClass::BA, ragged), doctest::Contains("ragged"), Error);
}

TEST_CASE("class labels") {
  CHECK(parse_class("BA") == VisemeClass::BA);
  CHECK(parse_class("bi") == VisemeClass::BI);
  CHECK(parse_class("/bou/") == VisemeClass::BOU);
  CHECK_THROWS_AS(parse_class("BE"), Error);
  for (auto c : kVisemeClasses) CHECK(parse_class(class_name(c)) == c);
}
