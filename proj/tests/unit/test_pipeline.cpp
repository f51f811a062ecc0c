#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <fstream>

#include "alife/corpus.hpp"
#include "alife/error.hpp"
#include "alife/pipeline.hpp"
#include "helpers.hpp"

using namespace alife;

TEST_CASE("configuration keys") {
  PipelineConfig cfg;
  cfg.set("snake.n", "48");
  cfg.set("tracker.R", " 6 ");
  cfg.set("tracker.method", "ncc");
  cfg.set("dark.aggregation", "mean");
  cfg.set("scorer", "uniform");
  cfg.set("C.BI", "0.2,0.3,0.5");
  cfg.set("presmooth", "off");
  CHECK(cfg.snake.n == 48);
  CHECK(cfg.tracker.R == 6);
  CHECK(cfg.track_method == TrackMethod::Ncc);
  CHECK(cfg.dark.aggregation == DarkAggregation::Mean);
  CHECK(cfg.classifier.scorer_mode == ScorerMode::Uniform);
  CHECK(cfg.classifier.weights_for(VisemeClass::BI)[2] == 0.5);
  CHECK_FALSE(cfg.presmooth);
  CHECK_NOTHROW(cfg.validate());

  cfg.set("fps", "30");
  cfg.set("duration", "0.5");
  CHECK(cfg.normalization.omega == 15);
  cfg.set("omega", "12");
  CHECK(cfg.normalization.omega == 12);

  CHECK_THROWS_WITH_AS(cfg.set("snake.gamma", "1"), doctest::Contains("unknown configuration key"), Error);
  CHECK_THROWS_AS(cfg.set("tracker.method", "sad"), Error);
  CHECK_THROWS_AS(cfg.set("snake.n", "many"), Error);
  cfg.set("split", "1.5");
  CHECK_THROWS_AS(cfg.validate(), Error);
}

TEST_CASE("configuration files") {
  testutil::TempDir dir("cfg");
  std::ofstream(dir.path / "a.cfg") << "# comment\n\nsnake.a = 0.5\nalpha_dist=2\n";
  const auto cfg = PipelineConfig::from_file(dir.path / "a.cfg");
  CHECK(cfg.snake.a == 0.5);
  CHECK(cfg.classifier.alpha_dist == 2.0);
  std::ofstream(dir.path / "b.cfg") << "snake.a 0.5\n";
  CHECK_THROWS_WITH_AS(PipelineConfig::from_file(dir.path / "b.cfg"), doctest::Contains(":1:"), Error);
  CHECK_THROWS_AS(PipelineConfig::from_file(dir.path / "none.cfg"), Error);
}

TEST_CASE("localization lands on the generator's POIs") {
  PipelineConfig cfg;
  for (auto cls : kVisemeClasses) {
    const auto u = synthesize(SyntheticUtteranceSpec::canonical(cls));
    const auto loc = localize(u.frames[0], cfg);
    CHECK(loc.contour.vertices.size() == static_cast<std::size_t>(cfg.snake.n));
    const auto got = loc.pois.points(), want = u.truth.pois[0].points();
    for (int k = 0; k < 4; ++k) CHECK(std::hypot(got[k].x - want[k].x, got[k].y - want[k].y) <= 3.0);
  }
}

TEST_CASE("analysis produces omega-length curves") {
  PipelineConfig cfg;
  const auto u = synthesize(speaker_variant(VisemeClass::BA, 3, NoiseSpec{0.05, 10}));
  const auto a = analyze(u.frames, cfg);
  CHECK(a.track.frames.size() == u.frames.size());
  CHECK(a.features.frames.size() == u.frames.size());
  CHECK(a.normalized.omega() == 10);
  CHECK(a.normalized.retained.speech_detected);
  CHECK_THROWS_AS(analyze({}, cfg), Error);

  cfg.track_method = TrackMethod::Ssd;
  CHECK(track(u.frames, a.localization.pois, cfg).frames.size() == u.frames.size());
}
