#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "alife/classify.hpp"
#include "alife/error.hpp"
#include "helpers.hpp"

using namespace alife;

namespace {

NormalizedUtterance curves(const std::array<std::vector<double>, 3>& c) {
  NormalizedUtterance u;
  for (auto id : kFeatures) u.curves[static_cast<int>(id)] = {id, c[static_cast<int>(id)], 1.0};
  return u;
}

std::vector<double> random_curve(int omega, double lo, double hi) {
  std::vector<double> v(static_cast<std::size_t>(omega));
  for (auto& x : v) x = testutil::rand_real(lo, hi);
  return v;
}

VisemeTemplate make_template(VisemeClass cls, int omega, double level) {
  VisemeTemplate t;
  t.cls = cls;
  t.sample_count = 1;
  for (auto& c : t.curves) c = std::vector<double>(static_cast<std::size_t>(omega), level);
  return t;
}

}  // namespace

TEST_CASE("distance vectors") {
  const std::vector<double> a{1, 2, 3}, b{1.5, 2.5, 3.5};
  CHECK(distance_vector(a, a) == std::vector<double>{0, 0, 0});
  CHECK(distance_vector(b, a) == std::vector<double>{0.5, 0.5, 0.5});
  const auto x = random_curve(10, -2, 2), y = random_curve(10, -2, 2);
  const auto d = distance_vector(x, y);
  for (int w = 0; w < 10; ++w) CHECK(d[w] == std::abs(x[w] - y[w]));
  CHECK_THROWS_AS(distance_vector(a, std::vector<double>{1, 2}), Error);
  const NormalizedFeatureVector dh{FeatureId::DH, a, 1.0}, dv{FeatureId::DV, a, 1.0};
  CHECK_THROWS_AS(distance_vector(dh, dv), Error);
}

TEST_CASE("distance transform") {
  ClassifierParams p;
  CHECK(transform(0, p) == 1.0);
  CHECK(transform(1, p) == 0.5);
  CHECK(transform(10, p) > transform(100, p));
  CHECK(transform(100, p) > transform(1000, p));
  CHECK(transform(1000, p) > 0.0);
  CHECK(transform(1000, p) < 0.001);
  double prev = transform(0, p);
  for (int k = 1; k <= 1000; ++k) {
    const double e = transform(k * 0.01, p);
    CHECK(e < prev);
    prev = e;
  }
}

TEST_CASE("uniform unit outputs") {
  const auto u = NeuralUnit::uniform(FeatureId::DV, VisemeClass::BA, 10);
  CHECK(u.output(std::vector<double>(10, 1.0)) == doctest::Approx(sigmoid(1.0)).epsilon(1e-12));
  CHECK(sigmoid(1.0) == doctest::Approx(0.7310585786));
  CHECK(u.output(std::vector<double>(10, 0.0)) == 0.5);
  CHECK_THROWS_AS(u.output(std::vector<double>(9, 0.0)), Error);
}

TEST_CASE("trained unit separates separable inputs with a monotone loss") {
  std::vector<std::vector<double>> inputs;
  std::vector<double> targets;
  for (int k = 0; k < 40; ++k) {
    const bool pos = k % 2 == 0;
    inputs.push_back(random_curve(10, pos ? 0.6 : 0.0, pos ? 1.0 : 0.4));
    targets.push_back(pos ? 1.0 : 0.0);
  }
  ClassifierParams p;
  p.learning_rate = 0.5;
  p.epochs = 800;
  LossHistory loss;
  const auto unit = fit_unit(FeatureId::DH, VisemeClass::BI, inputs, targets, p, &loss);
  REQUIRE(loss.size() == 800);
  for (std::size_t e = 1; e < loss.size(); ++e) CHECK(loss[e] <= loss[e - 1]);
  int correct = 0;
  for (std::size_t k = 0; k < inputs.size(); ++k) correct += (unit.output(inputs[k]) > 0.5) == (targets[k] == 1.0);
  CHECK(correct == 40);
}

TEST_CASE("fusion of a crafted score matrix") {
  const std::vector<VisemeClass> classes{VisemeClass::BA, VisemeClass::BI, VisemeClass::BOU};
  const std::vector<std::array<double, 3>> s{{0.8, 0.4, 0.4}, {0.3, 0.6, 0.5}, {0.2, 0.2, 0.7}};
  const auto r = fuse_scores(classes, s, ClassifierParams{});
  CHECK(r.feature_given_class[0][0] == doctest::Approx(0.5));
  CHECK(r.feature_given_class[0][1] == doctest::Approx(0.25));
  CHECK(r.feature_given_class[0][2] == doctest::Approx(0.25));
  for (std::size_t j = 0; j < 3; ++j) {
    double a = 0;
    for (double v : r.feature_given_class[j]) a += v;
    CHECK(std::abs(a - 1.0) <= 1e-9);
  }
  for (int i = 0; i < 3; ++i) {
    double b = 0;
    for (std::size_t j = 0; j < 3; ++j) b += r.class_given_feature[j][i];
    CHECK(std::abs(b - 1.0) <= 1e-9);
  }
  const auto best = std::max_element(r.posterior.begin(), r.posterior.end()) - r.posterior.begin();
  CHECK(r.winner == classes[best]);

  std::vector<std::array<double, 3>> zero{{0, 0, 0}, {0.1, 0.2, 0.3}, {0.1, 0.1, 0.1}};
  CHECK_THROWS_AS(fuse_scores(classes, zero, ClassifierParams{}), Error);
}

TEST_CASE("per-class rescaling of scores leaves P(F|SYL) unchanged") {
  const std::vector<VisemeClass> classes{VisemeClass::BA, VisemeClass::BI, VisemeClass::BOU};
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<std::array<double, 3>> s(3), t(3);
    for (std::size_t j = 0; j < 3; ++j) {
      const double c = testutil::rand_real(0.01, 50);
      for (int i = 0; i < 3; ++i) {
        s[j][i] = testutil::rand_real(0.01, 1);
        t[j][i] = c * s[j][i];
      }
    }
    const auto a = fuse_scores(classes, s, ClassifierParams{}), b = fuse_scores(classes, t, ClassifierParams{});
    for (std::size_t j = 0; j < 3; ++j) {
      double sum = 0;
      for (int i = 0; i < 3; ++i) {
        CHECK(std::abs(a.feature_given_class[j][i] - b.feature_given_class[j][i]) <= 1e-9);
        sum += a.feature_given_class[j][i];
      }
      CHECK(std::abs(sum - 1.0) <= 1e-9);
    }
  }
}

TEST_CASE("an utterance equal to a template is recognised as that class") {
  const int omega = 10;
  std::vector<VisemeTemplate> templates;
  templates.push_back(make_template(VisemeClass::BA, omega, 1.0));
  templates.push_back(make_template(VisemeClass::BI, omega, 1.4));
  templates.push_back(make_template(VisemeClass::BOU, omega, 0.6));
  ClassifierParams p;
  p.scorer_mode = ScorerMode::Uniform;
  const std::vector<LabeledUtterance> dummy{{VisemeClass::BA, curves(templates[0].curves)}};
  const auto units = train_units(dummy, templates, p);
  const auto r = recognize(curves(templates[0].curves), templates, units, p);
  CHECK(r.winner == VisemeClass::BA);
  for (int i = 0; i < 3; ++i) {
    CHECK(r.scores[0][i] == doctest::Approx(sigmoid(1.0)));
    CHECK(r.scores[0][i] > r.scores[1][i]);
    CHECK(r.scores[0][i] > r.scores[2][i]);
  }
  REQUIRE(r.distances.size() == 3);
  for (double d : r.distances[0][1]) CHECK(d == 0.0);

  const auto wrong = curves({random_curve(5, 0, 1), random_curve(5, 0, 1), random_curve(5, 0, 1)});
  CHECK_THROWS_WITH_AS(recognize(wrong, templates, units, p), "omega mismatch", Error);
}

TEST_CASE("trained units are deterministic and need two classes") {
  const int omega = 10;
  std::vector<VisemeTemplate> templates{make_template(VisemeClass::BA, omega, 1.0),
                                        make_template(VisemeClass::BI, omega, 1.5)};
  std::vector<LabeledUtterance> train;
  for (int k = 0; k < 20; ++k) {
    const double base = k % 2 ? 1.5 : 1.0;
    train.push_back({k % 2 ? VisemeClass::BI : VisemeClass::BA,
                     curves({random_curve(omega, base - 0.1, base + 0.1), random_curve(omega, base - 0.1, base + 0.1),
                             random_curve(omega, base - 0.1, base + 0.1)})});
  }
  ClassifierParams p;
  const auto a = train_units(train, templates, p);
  const auto b = train_units(train, templates, p);
  CHECK(a == b);
  int correct = 0;
  for (const auto& u : train) correct += recognize(u.curves, templates, a, p).winner == u.cls;
  CHECK(correct == 20);

  const std::vector<LabeledUtterance> single(train.begin(), train.begin() + 1);
  CHECK_THROWS_WITH_AS(train_units(single, templates, p), doctest::Contains("need at least 2 classes"), Error);
}

TEST_CASE("classifier parameter checks") {
  ClassifierParams p;
  p.alpha_dist = 0;
  CHECK_THROWS_AS(p.validate(), Error);
  p.alpha_dist = 1;
  p.C.push_back({VisemeClass::BA, {0.5, 0.5, 0.5}});
  CHECK_THROWS_AS(p.validate(), Error);
  p.C[0].weights = {0.5, 0.25, 0.25};
  CHECK_NOTHROW(p.validate());
  CHECK(p.weights_for(VisemeClass::BA)[0] == 0.5);
  CHECK(p.weights_for(VisemeClass::BI)[0] == doctest::Approx(1.0 / 3));
}
