#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "alife/corpus.hpp"
#include "alife/error.hpp"
#include "alife/evaluate.hpp"
#include "alife/pipeline.hpp"

namespace py = pybind11;
using namespace alife;

namespace {

using FloatArray = py::array_t<float, py::array::c_style | py::array::forcecast>;

PipelineConfig make_config(const std::map<std::string, py::object>& settings) {
  PipelineConfig cfg;
  for (const auto& [key, value] : settings) cfg.set(key, py::str(value));
  cfg.validate();
  return cfg;
}

Frame to_frame(const FloatArray& a) {
  if (a.ndim() != 2) throw Error("frame must be a 2-D array");
  const auto h = static_cast<int>(a.shape(0)), w = static_cast<int>(a.shape(1));
  return Frame(w, h, std::vector<float>(a.data(), a.data() + a.size()));
}

py::array_t<float> from_frame(const Frame& f) {
  py::array_t<float> out({f.height(), f.width()});
  std::copy(f.pixels().begin(), f.pixels().end(), out.mutable_data());
  return out;
}

std::vector<Frame> to_frames(const std::vector<FloatArray>& arrays) {
  std::vector<Frame> frames;
  for (const auto& a : arrays) frames.push_back(to_frame(a));
  return frames;
}

std::vector<py::array_t<float>> from_frames(const std::vector<Frame>& frames) {
  std::vector<py::array_t<float>> out;
  for (const auto& f : frames) out.push_back(from_frame(f));
  return out;
}

py::dict from_pois(const PoiSet& p) {
  py::dict d;
  const auto pts = p.points();
  for (std::size_t k = 0; k < 4; ++k) d[PoiSet::kNames[k]] = py::make_tuple(pts[k].x, pts[k].y);
  return d;
}

PoiSet to_pois(const py::dict& d) {
  PoiSet p;
  for (std::size_t k = 0; k < 4; ++k) {
    const auto xy = d[PoiSet::kNames[k]].cast<std::pair<int, int>>();
    p.set(k, {xy.first, xy.second});
  }
  return p;
}

py::dict from_curves(const NormalizedUtterance& u) {
  py::dict d;
  for (auto id : kFeatures) d[feature_name(id)] = py::array_t<double>(u[id].values.size(), u[id].values.data());
  d["first"] = u.retained.first;
  d["last"] = u.retained.last;
  return d;
}

NormalizedUtterance to_curves(const py::dict& d) {
  NormalizedUtterance u;
  for (auto id : kFeatures) {
    auto& c = u.curves[static_cast<int>(id)];
    c.feature = id;
    c.values = d[feature_name(id)].cast<std::vector<double>>();
  }
  return u;
}

FeatureTrack to_track(const py::array_t<double, py::array::c_style | py::array::forcecast>& a, double fps) {
  if (a.ndim() != 2 || a.shape(1) < 3) throw Error("features must be an (n, 3) or (n, 5) array");
  FeatureTrack t;
  t.fps = fps;
  for (py::ssize_t i = 0; i < a.shape(0); ++i) {
    FrameFeatures f{a.at(i, 0), a.at(i, 1), a.at(i, 2), 0, 0.0};
    if (a.shape(1) >= 5) {
      f.dark_count = static_cast<int>(a.at(i, 3));
      f.s_dark = a.at(i, 4);
    }
    t.frames.push_back(f);
  }
  return t;
}

py::array_t<double> from_track(const FeatureTrack& t) {
  py::array_t<double> out({static_cast<py::ssize_t>(t.frames.size()), py::ssize_t{5}});
  auto m = out.mutable_unchecked<2>();
  for (std::size_t i = 0; i < t.frames.size(); ++i) {
    const auto& f = t.frames[i];
    m(i, 0) = f.dh;
    m(i, 1) = f.dv;
    m(i, 2) = f.da;
    m(i, 3) = f.dark_count;
    m(i, 4) = f.s_dark;
  }
  return out;
}

std::vector<LabeledSequence> to_sequences(const std::vector<std::string>& labels,
                                          const std::vector<std::vector<FloatArray>>& sequences) {
  if (labels.size() != sequences.size()) throw Error("labels and sequences differ in length");
  std::vector<LabeledSequence> data;
  for (std::size_t i = 0; i < labels.size(); ++i) data.push_back({parse_class(labels[i]), to_frames(sequences[i])});
  return data;
}

py::dict from_report(const EvaluationReport& r) {
  py::dict d;
  std::vector<std::string> names;
  for (auto c : r.classes) names.push_back(class_name(c));
  d["classes"] = names;
  d["confusion"] = r.confusion;
  d["train_counts"] = r.train_counts;
  d["test_counts"] = r.test_counts;
  d["overall"] = r.overall_rate();
  d["text"] = r.to_text();
  return d;
}

}  // namespace

PYBIND11_MODULE(_alife, m) {
  py::register_exception<Error>(m, "AlifeError", PyExc_RuntimeError);

  py::class_<ModelBundle>(m, "Model")
      .def_readonly("omega", &ModelBundle::omega)
      .def_property_readonly("classes",
                             [](const ModelBundle& b) {
                               std::vector<std::string> names;
                               for (const auto& t : b.templates) names.push_back(class_name(t.cls));
                               return names;
                             })
      .def("save", [](const ModelBundle& b, const std::string& path) { save_bundle(b, path); })
      .def_static("load", [](const std::string& path) { return load_bundle(path); });

  m.def("derive_omega", &derive_omega, py::arg("fps"), py::arg("duration"));

  m.def(
      "synthesize",
      [](const std::string& label, std::optional<std::uint64_t> seed, double impulse, double drift,
         double alternate_offset) {
        NoiseSpec n;
        n.impulse_fraction = impulse;
        n.drift_amplitude = drift;
        n.alternate_offset = alternate_offset;
        const VisemeClass cls = parse_class(label);
        SyntheticUtteranceSpec spec = seed ? speaker_variant(cls, *seed, n) : SyntheticUtteranceSpec::canonical(cls);
        spec.noise = n;
        const auto u = synthesize(spec);
        py::dict d;
        d["frames"] = from_frames(u.frames);
        py::list pois;
        for (const auto& p : u.truth.pois) pois.append(from_pois(p));
        d["pois"] = pois;
        d["active"] = py::make_tuple(u.truth.active_start, u.truth.active_end);
        return d;
      },
      py::arg("label"), py::arg("seed") = py::none(), py::arg("impulse") = 0.0, py::arg("drift") = 0.0,
      py::arg("alternate_offset") = 0.0);

  m.def("load_sequence", [](const std::string& path) { return from_frames(load_sequence(path)); });

  using Settings = std::map<std::string, py::object>;

  m.def(
      "localize",
      [](const FloatArray& frame, const Settings& settings) {
        const auto loc = localize(to_frame(frame), make_config(settings));
        py::dict d;
        d["pois"] = from_pois(loc.pois);
        std::vector<std::pair<int, int>> ring;
        for (auto v : loc.contour.vertices) ring.emplace_back(v.x, v.y);
        d["contour"] = ring;
        d["sweeps"] = loc.contour.sweeps;
        d["energy"] = loc.contour.total_energy;
        return d;
      },
      py::arg("frame"), py::arg("config") = Settings{});

  m.def(
      "track",
      [](const std::vector<FloatArray>& frames, const py::dict& seed, const Settings& settings) {
        const auto r = track(to_frames(frames), to_pois(seed), make_config(settings));
        py::list out;
        for (const auto& p : r.frames) out.append(from_pois(p));
        return out;
      },
      py::arg("frames"), py::arg("seed"), py::arg("config") = Settings{});

  m.def(
      "extract",
      [](const std::vector<FloatArray>& frames, const std::vector<py::dict>& pois, const Settings& settings) {
        const auto cfg = make_config(settings);
        TrackResult t;
        for (const auto& p : pois) t.frames.push_back(to_pois(p));
        t.moves.resize(t.frames.size());
        return from_track(extract_track(to_frames(frames), t, cfg.dark, cfg.normalization.capture_rate));
      },
      py::arg("frames"), py::arg("pois"), py::arg("config") = Settings{});

  m.def(
      "normalize",
      [](const py::array_t<double, py::array::c_style | py::array::forcecast>& features, const Settings& settings) {
        const auto cfg = make_config(settings);
        return from_curves(normalize_track(to_track(features, cfg.normalization.capture_rate), cfg.normalization));
      },
      py::arg("features"), py::arg("config") = Settings{});

  m.def(
      "analyze",
      [](const std::vector<FloatArray>& frames, const Settings& settings) {
        return from_curves(analyze(to_frames(frames), make_config(settings)).normalized);
      },
      py::arg("frames"), py::arg("config") = Settings{});

  m.def(
      "train",
      [](const std::vector<std::string>& labels, const std::vector<py::dict>& curves, const Settings& settings) {
        if (labels.size() != curves.size()) throw Error("labels and curves differ in length");
        std::vector<LabeledUtterance> data;
        for (std::size_t i = 0; i < labels.size(); ++i) data.push_back({parse_class(labels[i]), to_curves(curves[i])});
        return train_bundle(data, make_config(settings));
      },
      py::arg("labels"), py::arg("curves"), py::arg("config") = Settings{});

  m.def(
      "recognize",
      [](const ModelBundle& model, const py::dict& curves) {
        const auto r = recognize(to_curves(curves), model);
        py::dict d;
        d["winner"] = class_name(r.winner);
        py::dict post;
        for (std::size_t j = 0; j < r.classes.size(); ++j) post[class_name(r.classes[j])] = r.posterior[j];
        d["posterior"] = post;
        return d;
      },
      py::arg("model"), py::arg("curves"));

  m.def(
      "evaluate",
      [](const std::vector<std::string>& labels, const std::vector<std::vector<FloatArray>>& sequences,
         const Settings& settings) { return from_report(evaluate(to_sequences(labels, sequences), make_config(settings))); },
      py::arg("labels"), py::arg("sequences"), py::arg("config") = Settings{});
}
