#include "alife/evaluate.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <fstream>
#include <mutex>
#include <thread>

#include "alife/error.hpp"
#include "alife/formats.hpp"

namespace alife {

namespace {

/// Runs fn(k) for k in [0, n) on a small pool; the first exception is
/// rethrown after all workers stop.
template <class Fn>
void parallel_for(std::size_t n, Fn fn) {
  const std::size_t workers = std::clamp<std::size_t>(std::thread::hardware_concurrency(), 1, 8);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex m;
  auto body = [&] {
    for (std::size_t k; (k = next++) < n;) {
      try {
        fn(k);
      } catch (...) {
        std::lock_guard lock(m);
        if (!failure) failure = std::current_exception();
        next = n;
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < std::min(workers, n); ++t) pool.emplace_back(body);
  body();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace

std::vector<LabeledUtterance> analyze_all(const std::vector<LabeledSequence>& data, const PipelineConfig& cfg) {
  cfg.validate();
  std::vector<LabeledUtterance> out(data.size());
  parallel_for(data.size(), [&](std::size_t k) { out[k] = {data[k].cls, analyze(data[k].frames, cfg).normalized}; });
  return out;
}

std::vector<LabeledUtterance> analyze_entries(const std::vector<ManifestEntry>& entries, const PipelineConfig& cfg) {
  cfg.validate();
  std::vector<LabeledUtterance> out(entries.size());
  parallel_for(entries.size(), [&](std::size_t k) {
    const auto& e = entries[k];
    try {
      if (e.path.extension() == ".csv" && std::filesystem::is_regular_file(e.path)) {
        std::ifstream in(e.path);
        out[k] = {e.cls, read_normalized_csv(in)};
      } else {
        out[k] = {e.cls, analyze(load_sequence(e.path), cfg).normalized};
      }
    } catch (const Error& err) {
      throw Error(e.path.string() + ": " + err.what());
    }
  });
  return out;
}

EvaluationReport evaluate_curves(const std::vector<LabeledUtterance>& data, const PipelineConfig& cfg) {
  cfg.validate();
  std::vector<VisemeClass> labels;
  for (const auto& u : data) labels.push_back(u.cls);
  const Split split = stratified_split(labels, cfg.train_fraction, cfg.seed);

  std::vector<LabeledUtterance> training;
  for (auto k : split.train) training.push_back(data[k]);
  const ModelBundle bundle = train_bundle(training, cfg);

  EvaluationReport r;
  for (const auto& t : bundle.templates) r.classes.push_back(t.cls);
  const std::size_t m = r.classes.size();
  r.confusion.assign(m, std::vector<int>(m, 0));
  r.train_counts.assign(m, 0);
  r.test_counts.assign(m, 0);
  auto slot = [&](VisemeClass c) {
    return static_cast<std::size_t>(std::find(r.classes.begin(), r.classes.end(), c) - r.classes.begin());
  };
  for (auto k : split.train) ++r.train_counts[slot(data[k].cls)];
  for (auto k : split.test) {
    const std::size_t j = slot(data[k].cls);
    ++r.test_counts[j];
    ++r.confusion[j][slot(recognize(data[k].curves, bundle).winner)];
  }
  return r;
}

EvaluationReport evaluate(const std::vector<LabeledSequence>& data, const PipelineConfig& cfg) {
  return evaluate_curves(analyze_all(data, cfg), cfg);
}

EvaluationReport evaluate(const std::vector<ManifestEntry>& entries, const PipelineConfig& cfg) {
  return evaluate_curves(analyze_entries(entries, cfg), cfg);
}

}  // namespace alife
