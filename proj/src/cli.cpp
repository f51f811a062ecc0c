#include "alife/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>

#include "alife/bundle.hpp"
#include "alife/corpus.hpp"
#include "alife/error.hpp"
#include "alife/evaluate.hpp"
#include "alife/formats.hpp"
#include "alife/pipeline.hpp"
#include "text.hpp"

namespace fs = std::filesystem;

namespace alife::cli {

namespace {

/// Options that map one-to-one onto PipelineConfig keys. Values are kept as
/// strings and applied after the config file and --set overrides.
struct ConfigFlags {
  std::string config_file;
  std::vector<std::string> overrides;
  std::vector<std::pair<CLI::Option*, std::string>> keyed;
  std::map<std::string, std::string> values;

  void attach_common(CLI::App* app) {
    app->add_option("--config", config_file, "key=value configuration file")->check(CLI::ExistingFile);
    app->add_option("--set", overrides, "configuration override key=value (repeatable)");
  }
  void add(CLI::App* app, const std::string& flag, const std::string& key, const std::string& help) {
    keyed.emplace_back(app->add_option(flag, values[key], help), key);
  }
  void add_switch(CLI::App* app, const std::string& flag, const std::string& key, const std::string& value,
                  const std::string& help) {
    auto* opt = app->add_flag_callback(flag, [this, key, value] { values[key] = value; }, help);
    keyed.emplace_back(opt, key);
  }

  PipelineConfig build() const {
    PipelineConfig cfg = config_file.empty() ? PipelineConfig{} : PipelineConfig::from_file(config_file);
    for (const auto& kv : overrides) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw Error("--set expects key=value, got '" + kv + "'");
      cfg.set(text::trim(kv.substr(0, eq)), kv.substr(eq + 1));
    }
    for (const auto& [opt, key] : keyed) {
      if (opt->count() > 0) cfg.set(key, values.at(key));
    }
    cfg.validate();
    return cfg;
  }
};

void add_snake_flags(CLI::App* app, ConfigFlags& f) {
  f.add(app, "--cx", "init.cx", "initial ellipse centre x (default: frame centre)");
  f.add(app, "--cy", "init.cy", "initial ellipse centre y (default: frame centre)");
  f.add(app, "--rx", "init.rx", "initial ellipse semi-axis along x");
  f.add(app, "--ry", "init.ry", "initial ellipse semi-axis along y");
  f.add(app, "--vertices", "snake.n", "snake vertex count");
  f.add(app, "--alpha-cont", "snake.a", "weight of the first-derivative term");
  f.add(app, "--beta-curv", "snake.b", "weight of the second-derivative term");
  f.add(app, "--c-cont", "snake.c_cont", "weight of the centroid pull");
  f.add(app, "--neighborhood", "snake.neighborhood", "half-width k of the (2k+1)^2 search window");
  f.add(app, "--max-iterations", "snake.max_iterations", "sweep limit");
  f.add_switch(app, "--no-presmooth", "presmooth", "0", "skip the 3x3 median before the gradient");
}

void add_tracker_flags(CLI::App* app, ConfigFlags& f) {
  f.add(app, "--block", "tracker.w", "block size w (odd)");
  f.add(app, "-R,--radius", "tracker.R", "candidate steps per Freeman direction");
  f.add(app, "--method", "tracker.method", "vote, ssd or ncc");
  f.add_switch(app, "--no-stationary", "tracker.stationary", "0", "exclude the zero-displacement candidate");
}

void add_dark_flags(CLI::App* app, ConfigFlags& f) {
  f.add(app, "--alpha-dark", "dark.alpha", "dark threshold fraction of the ROI mean");
  f.add(app, "--aggregation", "dark.aggregation", "sum or mean");
}

void add_norm_flags(CLI::App* app, ConfigFlags& f) {
  f.add(app, "--fps", "fps", "capture rate (re-derives omega)");
  f.add(app, "--duration", "duration", "syllable duration in seconds (re-derives omega)");
  f.add(app, "--omega", "omega", "normalised curve length");
  f.add(app, "--epsilon", "trim_epsilon", "relative-change threshold for trimming");
}

void add_classifier_flags(CLI::App* app, ConfigFlags& f) {
  f.add(app, "--alpha-dist", "alpha_dist", "distance transform slope");
  f.add(app, "--scorer", "scorer", "trained or uniform");
  f.add(app, "--learning-rate", "learning_rate", "gradient descent step");
  f.add(app, "--epochs", "epochs", "gradient descent epochs");
}

/// Writes to a file, or to `out` for "-".
template <class Fn>
void emit(const std::string& path, std::ostream& out, Fn fn) {
  if (path.empty() || path == "-") {
    fn(out);
    return;
  }
  std::ofstream f(path);
  if (!f) throw Error("cannot write " + path);
  fn(f);
  if (!f) throw Error("failed writing " + path);
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  return in;
}

bool is_normalized_csv(const fs::path& p) { return p.extension() == ".csv" && fs::is_regular_file(p); }

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"ALiFE lip-reading pipeline: localise, track, extract, normalise, train, recognise"};
  app.name("alife");
  app.require_subcommand(1);
  app.fallthrough(false);

  // localize
  auto* loc = app.add_subcommand("localize", "fit the snake on one frame and report the POIs");
  ConfigFlags loc_f;
  std::string loc_frame, loc_out, loc_png;
  loc->add_option("frame", loc_frame, "PGM or PNG frame")->required()->check(CLI::ExistingFile);
  loc->add_option("-o,--out", loc_out, "POI key=value file (default stdout)");
  loc->add_option("--annotate", loc_png, "annotated PNG with the contour and POIs");
  loc_f.attach_common(loc);
  add_snake_flags(loc, loc_f);

  // track
  auto* trk = app.add_subcommand("track", "track the four POIs through a sequence");
  ConfigFlags trk_f;
  std::string trk_seq, trk_pois, trk_out, trk_left, trk_right, trk_upper, trk_lower;
  trk->add_option("sequence", trk_seq, "frame directory or frame list")->required()->check(CLI::ExistingPath);
  trk->add_option("--pois", trk_pois, "seed POIs from `localize` (default: localise frame 0)")
      ->check(CLI::ExistingFile);
  auto* o_left = trk->add_option("--left", trk_left, "seed left corner x,y");
  auto* o_right = trk->add_option("--right", trk_right, "seed right corner x,y");
  auto* o_upper = trk->add_option("--upper", trk_upper, "seed upper centre x,y");
  auto* o_lower = trk->add_option("--lower", trk_lower, "seed lower centre x,y");
  o_left->needs(o_right)->needs(o_upper)->needs(o_lower)->excludes("--pois");
  trk->add_option("-o,--out", trk_out, "track CSV (default stdout)");
  trk_f.attach_common(trk);
  add_tracker_flags(trk, trk_f);
  add_snake_flags(trk, trk_f);

  // extract
  auto* ext = app.add_subcommand("extract", "per-frame DH, DV and DA from a tracked sequence");
  ConfigFlags ext_f;
  std::string ext_seq, ext_track, ext_out;
  ext->add_option("sequence", ext_seq, "frame directory or frame list")->required()->check(CLI::ExistingPath);
  ext->add_option("--track", ext_track, "track CSV")->required()->check(CLI::ExistingFile);
  ext->add_option("-o,--out", ext_out, "feature CSV (default stdout)");
  ext_f.attach_common(ext);
  add_dark_flags(ext, ext_f);
  add_norm_flags(ext, ext_f);

  // normalize
  auto* nrm = app.add_subcommand("normalize", "trim, resample and rescale a feature CSV");
  ConfigFlags nrm_f;
  std::string nrm_in, nrm_out;
  nrm->add_option("features", nrm_in, "feature CSV")->required()->check(CLI::ExistingFile);
  nrm->add_option("-o,--out", nrm_out, "normalised CSV (default stdout)");
  nrm_f.attach_common(nrm);
  add_norm_flags(nrm, nrm_f);

  // train
  auto* trn = app.add_subcommand("train", "build templates and neural units from a labelled manifest");
  ConfigFlags trn_f;
  std::string trn_manifest, trn_out;
  trn->add_option("manifest", trn_manifest, "label,path lines")->required()->check(CLI::ExistingFile);
  trn->add_option("-o,--out", trn_out, "model bundle")->required();
  trn_f.attach_common(trn);
  add_snake_flags(trn, trn_f);
  add_tracker_flags(trn, trn_f);
  add_dark_flags(trn, trn_f);
  add_norm_flags(trn, trn_f);
  add_classifier_flags(trn, trn_f);

  // recognize
  auto* rec = app.add_subcommand("recognize", "classify one utterance against a model bundle");
  ConfigFlags rec_f;
  std::string rec_in, rec_model, rec_csv;
  rec->add_option("input", rec_in, "frame sequence or normalised CSV")->required()->check(CLI::ExistingPath);
  rec->add_option("-m,--model", rec_model, "model bundle")->required()->check(CLI::ExistingFile);
  rec->add_option("--csv", rec_csv, "append the result as a CSV row to this file");
  rec_f.attach_common(rec);
  add_snake_flags(rec, rec_f);
  add_tracker_flags(rec, rec_f);
  add_norm_flags(rec, rec_f);

  // evaluate
  auto* evl = app.add_subcommand("evaluate", "train/test split, recognition and confusion matrix");
  ConfigFlags evl_f;
  std::string evl_manifest, evl_out, evl_csv;
  evl->add_option("manifest", evl_manifest, "label,path lines")->required()->check(CLI::ExistingFile);
  evl->add_option("-o,--out", evl_out, "text report (default stdout)");
  evl->add_option("--csv", evl_csv, "CSV report");
  evl_f.attach_common(evl);
  evl_f.add(evl, "--split", "split", "training fraction per class");
  evl_f.add(evl, "--seed", "seed", "split shuffle seed");
  add_snake_flags(evl, evl_f);
  add_tracker_flags(evl, evl_f);
  add_dark_flags(evl, evl_f);
  add_norm_flags(evl, evl_f);
  add_classifier_flags(evl, evl_f);

  // synth
  auto* syn = app.add_subcommand("synth", "render synthetic utterances with ground truth");
  std::string syn_class = "BA", syn_out;
  std::uint64_t syn_seed = 1;
  int syn_per_class = 0, syn_frames = 35;
  bool syn_variant = false;
  NoiseSpec noise;
  syn->add_option("-o,--out", syn_out, "output directory")->required();
  syn->add_option("--class", syn_class, "BA, BI or BOU (single utterance)");
  syn->add_option("--seed", syn_seed, "generator seed");
  syn->add_option("--per-class", syn_per_class, "write a corpus of N speakers per class plus manifest.csv")
      ->check(CLI::PositiveNumber);
  syn->add_flag("--variant", syn_variant, "jitter the speaker (single utterance)");
  syn->add_option("--frames", syn_frames, "frames per utterance")->check(CLI::Range(2, 10000));
  syn->add_option("--impulse", noise.impulse_fraction, "salt-and-pepper fraction")->check(CLI::Range(0.0, 0.5));
  syn->add_option("--drift", noise.drift_amplitude, "sinusoidal luminance drift amplitude");
  syn->add_option("--drift-period", noise.drift_period, "drift period in frames")->check(CLI::PositiveNumber);
  syn->add_option("--alternate-offset", noise.alternate_offset, "luminance offset on every second frame");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    if (argc <= 1) err << app.help();
    return 2;
  }

  try {
    if (*loc) {
      const PipelineConfig cfg = loc_f.build();
      const Frame frame = load_frame(loc_frame);
      const Localization l = localize(frame, cfg);
      emit(loc_out, out, [&](std::ostream& o) {
        write_pois(l.pois, o);
        if (l.pois.cupid_bow) {
          const auto& cb = *l.pois.cupid_bow;
          o << "cupid_bow=" << cb[0].x << ',' << cb[0].y << ';' << cb[1].x << ',' << cb[1].y << ';' << cb[2].x << ','
            << cb[2].y << '\n';
        }
        o << "sweeps=" << l.contour.sweeps << '\n';
        o << "energy=" << text::format_double(l.contour.total_energy) << '\n';
      });
      if (!loc_png.empty()) {
        std::vector<PixelPoint> marks = l.contour.vertices;
        for (const auto& p : l.pois.points()) marks.push_back(p);
        save_annotated_png(frame, marks, Rgb{255, 40, 40}, loc_png);
      }
    } else if (*trk) {
      const PipelineConfig cfg = trk_f.build();
      const auto frames = load_sequence(trk_seq);
      PoiSet seed;
      if (!trk_pois.empty()) {
        auto in = open_input(trk_pois);
        seed = read_pois(in);
      } else if (*o_left) {
        seed = parse_point_list(trk_left, trk_right, trk_upper, trk_lower);
      } else {
        seed = localize(frames.front(), cfg).pois;
      }
      const TrackResult t = track(frames, seed, cfg);
      emit(trk_out, out, [&](std::ostream& o) { write_track_csv(t, o); });
    } else if (*ext) {
      const PipelineConfig cfg = ext_f.build();
      const auto frames = load_sequence(ext_seq);
      auto in = open_input(ext_track);
      const TrackResult t = read_track_csv(in);
      if (t.frames.size() != frames.size()) {
        throw Error("track CSV covers " + std::to_string(t.frames.size()) + " frames, sequence has " +
                    std::to_string(frames.size()));
      }
      const FeatureTrack ft = extract_track(frames, t, cfg.dark, cfg.normalization.capture_rate);
      emit(ext_out, out, [&](std::ostream& o) { write_features_csv(ft, o); });
    } else if (*nrm) {
      const PipelineConfig cfg = nrm_f.build();
      auto in = open_input(nrm_in);
      const FeatureTrack ft = read_features_csv(in, cfg.normalization.capture_rate);
      const NormalizedUtterance u = normalize_track(ft, cfg.normalization);
      emit(nrm_out, out, [&](std::ostream& o) { write_normalized_csv(u, o); });
    } else if (*trn) {
      const PipelineConfig cfg = trn_f.build();
      const auto curves = analyze_entries(read_manifest(trn_manifest), cfg);
      const ModelBundle b = train_bundle(curves, cfg);
      save_bundle(b, trn_out);
      out << "trained " << b.templates.size() << " classes from " << curves.size() << " utterances, omega="
          << b.omega << '\n';
    } else if (*rec) {
      PipelineConfig cfg = rec_f.build();
      const ModelBundle b = load_bundle(rec_model);
      check_compatible(b, cfg.normalization);
      cfg.dark = b.dark;
      cfg.normalization = b.normalization;
      NormalizedUtterance u;
      if (is_normalized_csv(rec_in)) {
        auto in = open_input(rec_in);
        u = read_normalized_csv(in);
      } else {
        u = analyze(load_sequence(rec_in), cfg).normalized;
      }
      const RecognitionResult r = recognize(u, b);
      out << std::fixed << std::setprecision(6);
      for (std::size_t j = 0; j < r.classes.size(); ++j) {
        out << "P(" << class_description(r.classes[j]) << " | O) = " << r.posterior[j] << '\n';
      }
      out << "winner: " << class_name(r.winner) << '\n';
      std::ostringstream header, row;
      header << "input,winner";
      row << rec_in << ',' << class_name(r.winner);
      for (std::size_t j = 0; j < r.classes.size(); ++j) {
        header << ",P_" << class_name(r.classes[j]);
        row << ',' << text::format_double(r.posterior[j]);
      }
      out << header.str() << '\n' << row.str() << '\n';
      if (!rec_csv.empty()) {
        const bool fresh = !fs::exists(rec_csv) || fs::file_size(rec_csv) == 0;
        std::ofstream f(rec_csv, std::ios::app);
        if (!f) throw Error("cannot write " + rec_csv);
        if (fresh) f << header.str() << '\n';
        f << row.str() << '\n';
      }
    } else if (*evl) {
      const PipelineConfig cfg = evl_f.build();
      const EvaluationReport r = evaluate(read_manifest(evl_manifest), cfg);
      emit(evl_out, out, [&](std::ostream& o) { o << r.to_text(); });
      if (!evl_csv.empty()) emit(evl_csv, out, [&](std::ostream& o) { o << r.to_csv(); });
    } else if (*syn) {
      const fs::path dir(syn_out);
      if (syn_per_class > 0) {
        std::vector<ManifestEntry> entries;
        for (auto c : kVisemeClasses) {
          for (int k = 0; k < syn_per_class; ++k) {
            SyntheticUtteranceSpec s = speaker_variant(c, syn_seed * 100003ULL + k, noise);
            s.frames = syn_frames;
            std::ostringstream name;
            name << class_name(c) << '_' << std::setw(3) << std::setfill('0') << k;
            write_utterance(synthesize(s), dir / name.str());
            entries.push_back({c, name.str()});
          }
        }
        write_manifest(entries, dir / "manifest.csv");
        out << "wrote " << entries.size() << " utterances and " << (dir / "manifest.csv").string() << '\n';
      } else {
        const VisemeClass c = parse_class(syn_class);
        SyntheticUtteranceSpec s = syn_variant ? speaker_variant(c, syn_seed, noise) : SyntheticUtteranceSpec::canonical(c);
        s.noise = noise;
        s.rng_seed = syn_variant ? s.rng_seed : syn_seed;
        s.frames = syn_frames;
        write_utterance(synthesize(s), dir);
        out << "wrote " << syn_frames << " frames to " << dir.string() << '\n';
      }
    }
  } catch (const std::exception& e) {
    err << "alife: error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace alife::cli
