#pragma once

#include <vector>

#include "alife/corpus.hpp"
#include "alife/pipeline.hpp"

namespace alife {

struct LabeledSequence {
  VisemeClass cls;
  std::vector<Frame> frames;
};

/// Normalised curves for every sequence. Utterances are analysed in
/// parallel; the output order matches the input.
std::vector<LabeledUtterance> analyze_all(const std::vector<LabeledSequence>& data, const PipelineConfig& cfg);

/// Manifest entries are either frame sequences (directory or list file) or
/// normalised-curve CSV files (`.csv`). Sequences are loaded one at a time
/// inside the workers.
std::vector<LabeledUtterance> analyze_entries(const std::vector<ManifestEntry>& entries, const PipelineConfig& cfg);

/// Split per class, train on the training part and recognise the held-out part.
EvaluationReport evaluate_curves(const std::vector<LabeledUtterance>& data, const PipelineConfig& cfg);

EvaluationReport evaluate(const std::vector<LabeledSequence>& data, const PipelineConfig& cfg);
EvaluationReport evaluate(const std::vector<ManifestEntry>& entries, const PipelineConfig& cfg);

}  // namespace alife
