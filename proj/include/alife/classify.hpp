#pragma once

#include <array>
#include <span>
#include <vector>

#include "alife/normalize.hpp"
#include "alife/templates.hpp"

namespace alife {

enum class ScorerMode { Trained, Uniform };

/// Per-class feature weights: weights[i] multiplies feature i and the three
/// weights sum to 1.
struct ClassWeights {
  VisemeClass cls = VisemeClass::BA;
  std::array<double, 3> weights{1.0 / 3, 1.0 / 3, 1.0 / 3};

  friend bool operator==(const ClassWeights&, const ClassWeights&) = default;
};

struct ClassifierParams {
  double alpha_dist = 1.0;
  ScorerMode scorer_mode = ScorerMode::Trained;
  std::vector<ClassWeights> C;  ///< empty means uniform 1/3 for every class

  double learning_rate = 0.1;
  int epochs = 500;

  void validate() const;
  std::array<double, 3> weights_for(VisemeClass cls) const;

  friend bool operator==(const ClassifierParams&, const ClassifierParams&) = default;
};

/// Single sigmoid neuron over the omega transformed distances of one
/// (feature, class) pair.
struct NeuralUnit {
  FeatureId feature = FeatureId::DH;
  VisemeClass cls = VisemeClass::BA;
  std::vector<double> weights;
  double bias = 0.0;

  double output(std::span<const double> e) const;
  static NeuralUnit uniform(FeatureId feature, VisemeClass cls, int omega);

  friend bool operator==(const NeuralUnit&, const NeuralUnit&) = default;
};

/// units[j][i]: class j (template order), feature i.
using UnitMatrix = std::vector<std::array<NeuralUnit, 3>>;

double sigmoid(double z);

std::vector<double> distance_vector(const NormalizedFeatureVector& fv, const NormalizedFeatureVector& tmpl);
std::vector<double> distance_vector(std::span<const double> fv, std::span<const double> tmpl);

double transform(double d, const ClassifierParams& p);

/// Transformed similarities e_w for one utterance against one template curve.
std::vector<double> similarity_inputs(std::span<const double> fv, std::span<const double> tmpl,
                                      const ClassifierParams& p);

struct LabeledUtterance {
  VisemeClass cls;
  NormalizedUtterance curves;
};

/// Per-epoch mean cross-entropy, recorded while fitting one unit.
using LossHistory = std::vector<double>;

/// Batch gradient descent on cross-entropy with one-vs-rest targets.
NeuralUnit fit_unit(FeatureId feature, VisemeClass cls, std::span<const std::vector<double>> inputs,
                    std::span<const double> targets, const ClassifierParams& p, LossHistory* history = nullptr);

UnitMatrix train_units(std::span<const LabeledUtterance> training, std::span<const VisemeTemplate> templates,
                       const ClassifierParams& p);

struct RecognitionResult {
  std::vector<VisemeClass> classes;                     ///< template order
  std::vector<double> posterior;                        ///< P(SYL_j / O)
  VisemeClass winner = VisemeClass::BA;
  std::vector<std::array<double, 3>> scores;            ///< S[j][i]
  std::vector<std::array<double, 3>> feature_given_class;  ///< P(F_i / SYL_j), sums to 1 over i
  std::vector<std::array<double, 3>> class_given_feature;  ///< P(SYL_j / F_i), sums to 1 over j
  std::vector<std::array<std::vector<double>, 3>> distances;  ///< d[j][i][w]

  friend bool operator==(const RecognitionResult&, const RecognitionResult&) = default;
};

/// Fusion of an S matrix (scores[j][i]) into the probabilities and winner.
RecognitionResult fuse_scores(std::vector<VisemeClass> classes, std::vector<std::array<double, 3>> scores,
                              const ClassifierParams& p);

RecognitionResult recognize(const NormalizedUtterance& fvs, std::span<const VisemeTemplate> templates,
                            const UnitMatrix& units, const ClassifierParams& p);

struct ModelBundle;
RecognitionResult recognize(const NormalizedUtterance& fvs, const ModelBundle& bundle);

}  // namespace alife
