#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <fstream>
#include <sstream>

#include "alife/bundle.hpp"
#include "alife/error.hpp"
#include "alife/pipeline.hpp"
#include "helpers.hpp"
#include "text.hpp"

using namespace alife;

namespace {

ModelBundle trained_bundle(int omega = 10) {
  PipelineConfig cfg;
  cfg.normalization.omega = omega;
  cfg.classifier.epochs = 50;
  cfg.classifier.C.push_back({VisemeClass::BI, {0.2, 0.5, 0.3}});
  std::vector<LabeledUtterance> train;
  for (int k = 0; k < 12; ++k) {
    const auto cls = kVisemeClasses[k % 3];
    NormalizedUtterance u;
    for (auto id : kFeatures) {
      std::vector<double> v(static_cast<std::size_t>(omega));
      for (auto& x : v) x = 1.0 + 0.3 * static_cast<int>(cls) + testutil::rand_real(-0.1, 0.1);
      u.curves[static_cast<int>(id)] = {id, v, 1.0};
    }
    train.push_back({cls, u});
  }
  return train_bundle(train, cfg);
}

std::string serialise(const ModelBundle& b) {
  std::ostringstream out;
  write_bundle(b, out);
  return out.str();
}

ModelBundle parse(const std::string& s) {
  std::istringstream in(s);
  return read_bundle(in);
}

}  // namespace

TEST_CASE("bundle round trip is exact") {
  const ModelBundle b = trained_bundle();
  REQUIRE(b.templates.size() == 3);
  CHECK(parse(serialise(b)) == b);

  testutil::TempDir dir("bundle");
  save_bundle(b, dir.path / "m.alife");
  CHECK(load_bundle(dir.path / "m.alife") == b);
  CHECK_THROWS_AS(load_bundle(dir.path / "missing.alife"), Error);
}

TEST_CASE("damaged bundles are rejected") {
  const std::string s = serialise(trained_bundle());
  CHECK_THROWS_WITH_AS(parse(s.substr(0, s.size() / 2)), doctest::Contains("corrupted model bundle"), Error);
  CHECK_THROWS_WITH_AS(parse(""), doctest::Contains("corrupted model bundle"), Error);

  std::string flipped = s;
  flipped[flipped.find("omega 10") + 6] = '9';
  CHECK_THROWS_WITH_AS(parse(flipped), doctest::Contains("checksum"), Error);
}

TEST_CASE("unsupported versions are named") {
  const std::string s = serialise(trained_bundle());
  std::string body = s.substr(0, s.rfind("checksum "));
  body.replace(body.find("ALIFE-MODEL 1"), 13, "ALIFE-MODEL 7");
  // Re-sign the edited body so only the version differs.
  char hex[17];
  std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(text::fnv1a(body)));
  std::ostringstream signed_body;
  signed_body << body << "checksum " << hex << '\n';
  CHECK_THROWS_WITH_AS(parse(signed_body.str()), doctest::Contains("version 7"), Error);
}

TEST_CASE("omega guard") {
  const ModelBundle b = trained_bundle(10);
  NormalizationParams run;
  CHECK_NOTHROW(check_compatible(b, run));
  run.omega = 15;
  CHECK_THROWS_WITH_AS(check_compatible(b, run), doctest::Contains("omega mismatch"), Error);
  NormalizedUtterance u;
  for (auto id : kFeatures) u.curves[static_cast<int>(id)] = {id, std::vector<double>(15, 1.0), 1.0};
  CHECK_THROWS_WITH_AS(recognize(u, b), doctest::Contains("omega mismatch"), Error);
}
