#include "alife/classify.hpp"

#include <algorithm>
#include <cmath>

#include "alife/bundle.hpp"
#include "alife/error.hpp"

namespace alife {

void ClassifierParams::validate() const {
  if (!(alpha_dist > 0.0)) throw Error("alpha_dist must be positive");
  if (!(learning_rate > 0.0) || epochs < 0) throw Error("invalid training schedule");
  for (const auto& c : C) {
    double sum = 0.0;
    for (double w : c.weights) {
      if (w < 0.0) throw Error("feature weights must be non-negative");
      sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-9) {
      throw Error(std::string("feature weights for class ") + class_name(c.cls) + " must sum to 1");
    }
  }
}

std::array<double, 3> ClassifierParams::weights_for(VisemeClass cls) const {
  for (const auto& c : C) {
    if (c.cls == cls) return c.weights;
  }
  return {1.0 / 3, 1.0 / 3, 1.0 / 3};
}

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

double NeuralUnit::output(std::span<const double> e) const {
  if (e.size() != weights.size()) throw Error("neural unit input length does not match omega");
  double z = bias;
  for (std::size_t w = 0; w < e.size(); ++w) z += weights[w] * e[w];
  return sigmoid(z);
}

NeuralUnit NeuralUnit::uniform(FeatureId feature, VisemeClass cls, int omega) {
  return {feature, cls, std::vector<double>(static_cast<std::size_t>(omega), 1.0 / omega), 0.0};
}

std::vector<double> distance_vector(std::span<const double> fv, std::span<const double> tmpl) {
  if (fv.size() != tmpl.size()) throw Error("curve length mismatch");
  std::vector<double> d(fv.size());
  for (std::size_t w = 0; w < d.size(); ++w) d[w] = std::abs(fv[w] - tmpl[w]);
  return d;
}

std::vector<double> distance_vector(const NormalizedFeatureVector& fv, const NormalizedFeatureVector& tmpl) {
  if (fv.feature != tmpl.feature) throw Error("feature mismatch between curve and template");
  return distance_vector(fv.values, tmpl.values);
}

double transform(double d, const ClassifierParams& p) { return 1.0 / (1.0 + p.alpha_dist * d); }

std::vector<double> similarity_inputs(std::span<const double> fv, std::span<const double> tmpl,
                                      const ClassifierParams& p) {
  auto e = distance_vector(fv, tmpl);
  for (double& x : e) x = transform(x, p);
  return e;
}

NeuralUnit fit_unit(FeatureId feature, VisemeClass cls, std::span<const std::vector<double>> inputs,
                    std::span<const double> targets, const ClassifierParams& p, LossHistory* history) {
  if (inputs.empty() || inputs.size() != targets.size()) throw Error("training inputs and targets disagree");
  const std::size_t omega = inputs.front().size();
  NeuralUnit unit = NeuralUnit::uniform(feature, cls, static_cast<int>(omega));
  const double m = static_cast<double>(inputs.size());
  std::vector<double> grad(omega);
  for (int epoch = 0; epoch < p.epochs; ++epoch) {
    std::fill(grad.begin(), grad.end(), 0.0);
    double grad_b = 0.0, loss = 0.0;
    for (std::size_t k = 0; k < inputs.size(); ++k) {
      const double y = unit.output(inputs[k]);
      const double err = y - targets[k];
      for (std::size_t w = 0; w < omega; ++w) grad[w] += err * inputs[k][w];
      grad_b += err;
      const double clipped = std::clamp(y, 1e-15, 1.0 - 1e-15);
      loss -= targets[k] * std::log(clipped) + (1.0 - targets[k]) * std::log(1.0 - clipped);
    }
    if (history) history->push_back(loss / m);
    for (std::size_t w = 0; w < omega; ++w) unit.weights[w] -= p.learning_rate * grad[w] / m;
    unit.bias -= p.learning_rate * grad_b / m;
  }
  return unit;
}

UnitMatrix train_units(std::span<const LabeledUtterance> training, std::span<const VisemeTemplate> templates,
                       const ClassifierParams& p) {
  p.validate();
  if (templates.empty() || training.empty()) throw Error("empty training set");
  const int omega = static_cast<int>(templates.front().curves[0].size());
  UnitMatrix units(templates.size());
  if (p.scorer_mode == ScorerMode::Uniform) {
    for (std::size_t j = 0; j < templates.size(); ++j) {
      for (auto id : kFeatures) units[j][static_cast<int>(id)] = NeuralUnit::uniform(id, templates[j].cls, omega);
    }
    return units;
  }

  std::vector<VisemeClass> present;
  for (const auto& u : training) {
    if (std::find(present.begin(), present.end(), u.cls) == present.end()) present.push_back(u.cls);
  }
  if (present.size() < 2) throw Error("need at least 2 classes to train the neural units");

  for (std::size_t j = 0; j < templates.size(); ++j) {
    for (auto id : kFeatures) {
      std::vector<std::vector<double>> inputs;
      std::vector<double> targets;
      inputs.reserve(training.size());
      for (const auto& u : training) {
        inputs.push_back(similarity_inputs(u.curves[id].values, templates[j][id], p));
        targets.push_back(u.cls == templates[j].cls ? 1.0 : 0.0);
      }
      units[j][static_cast<int>(id)] = fit_unit(id, templates[j].cls, inputs, targets, p);
    }
  }
  return units;
}

RecognitionResult fuse_scores(std::vector<VisemeClass> classes, std::vector<std::array<double, 3>> scores,
                              const ClassifierParams& p) {
  const std::size_t J = classes.size();
  if (J == 0 || scores.size() != J) throw Error("score matrix does not match class list");
  RecognitionResult r;
  r.classes = std::move(classes);
  r.scores = std::move(scores);
  r.feature_given_class.resize(J);
  r.class_given_feature.resize(J);
  r.posterior.assign(J, 0.0);

  for (std::size_t j = 0; j < J; ++j) {
    double z = 0.0;
    for (double s : r.scores[j]) z += s;
    if (!(z > 0.0)) throw Error(std::string("all scores are zero for class ") + class_name(r.classes[j]));
    for (int i = 0; i < 3; ++i) r.feature_given_class[j][i] = r.scores[j][i] / z;
  }
  // Bayes with a uniform class prior; the evidence for feature i is the sum
  // of its scores over the classes.
  for (int i = 0; i < 3; ++i) {
    double evidence = 0.0;
    for (std::size_t j = 0; j < J; ++j) evidence += r.scores[j][i];
    for (std::size_t j = 0; j < J; ++j) r.class_given_feature[j][i] = r.scores[j][i] / evidence;
  }
  std::size_t best = 0;
  for (std::size_t j = 0; j < J; ++j) {
    const auto c = p.weights_for(r.classes[j]);
    for (int i = 0; i < 3; ++i) r.posterior[j] += c[i] * r.class_given_feature[j][i];
    if (r.posterior[j] > r.posterior[best]) best = j;
  }
  r.winner = r.classes[best];
  return r;
}

RecognitionResult recognize(const NormalizedUtterance& fvs, std::span<const VisemeTemplate> templates,
                            const UnitMatrix& units, const ClassifierParams& p) {
  if (units.size() != templates.size()) throw Error("unit matrix does not match templates");
  std::vector<VisemeClass> classes;
  std::vector<std::array<double, 3>> scores(templates.size());
  std::vector<std::array<std::vector<double>, 3>> dist(templates.size());
  for (std::size_t j = 0; j < templates.size(); ++j) {
    classes.push_back(templates[j].cls);
    for (auto id : kFeatures) {
      const int i = static_cast<int>(id);
      if (fvs[id].values.size() != templates[j][id].size()) throw Error("omega mismatch");
      dist[j][i] = distance_vector(fvs[id].values, templates[j][id]);
      std::vector<double> e = dist[j][i];
      for (double& x : e) x = transform(x, p);
      scores[j][i] = units[j][i].output(e);
    }
  }
  RecognitionResult r = fuse_scores(std::move(classes), std::move(scores), p);
  r.distances = std::move(dist);
  return r;
}

RecognitionResult recognize(const NormalizedUtterance& fvs, const ModelBundle& bundle) {
  if (fvs.omega() != bundle.omega) throw Error("omega mismatch");
  return recognize(fvs, bundle.templates, bundle.units, bundle.classifier);
}

}  // namespace alife
