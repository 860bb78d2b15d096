#include "voxflow/cli.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cstdlib>
#include <mutex>
#include <optional>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"
#include "voxflow/heatmap.hpp"
#include "voxflow/inflate.hpp"
#include "voxflow/metrics.hpp"
#include "voxflow/pipeline.hpp"
#include "voxflow/reliability.hpp"
#include "voxflow/roi.hpp"
#include "voxflow/sampler.hpp"
#include "voxflow/tensor_io.hpp"

namespace voxflow::cli {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

constexpr const char* kExitCodes =
    "Exit codes:\n"
    "  0  success\n"
    "  1  usage error or invalid argument\n"
    "  2  I/O or file-format error\n"
    "  3  schema or range error in an input document\n"
    "  4  shape error\n"
    "  5  infeasible request (empty set, one class only, no contour, ...)\n";

struct Globals {
  std::uint64_t seed = 0;
  bool seed_given = false;
  unsigned threads = 1;
  bool quiet = false;
};

ordered_json parse_json_file(const fs::path& path) {
  const std::string text = io::read_text(path);
  try {
    return ordered_json::parse(text);
  } catch (const ordered_json::parse_error& e) {
    throw Error(ErrorCode::JsonMalformed, path.string() + ": " + e.what());
  }
}

/// Accepts a VOX1 file or a directory of frame_NNNNN.png files.
Volume read_volume(const fs::path& path) {
  std::error_code ec;
  if (fs::is_directory(path, ec)) return io::read_png_stack(path);
  return io::read_vox1(path);
}

ordered_json cuboid_json(const Cuboid& c) {
  return {{"f0", c.f0}, {"f1", c.f1}, {"r0", c.r0}, {"r1", c.r1}, {"c0", c.c0}, {"c1", c.c1}};
}

Cuboid cuboid_from_json(const ordered_json& j, std::size_t index) {
  const auto where = "cuboid " + std::to_string(index);
  if (!j.is_object()) throw Error(ErrorCode::SchemaError, where + ": must be an object");
  Cuboid c;
  const std::pair<const char*, std::size_t*> fields[] = {{"f0", &c.f0}, {"f1", &c.f1}, {"r0", &c.r0},
                                                         {"r1", &c.r1}, {"c0", &c.c0}, {"c1", &c.c1}};
  for (const auto& [key, dst] : fields) {
    if (!j.contains(key) || !j[key].is_number_unsigned())
      throw Error(ErrorCode::SchemaError, where + ", field '" + key + "': required non-negative integer");
    *dst = j[key].get<std::size_t>();
  }
  for (const auto& [k, _] : j.items())
    if (std::none_of(std::begin(fields), std::end(fields), [&](const auto& f) { return k == f.first; }))
      throw Error(ErrorCode::SchemaError, where + ", field '" + k + "': unknown field");
  if (c.f1 <= c.f0 || c.r1 <= c.r0 || c.c1 <= c.c0) throw Error(ErrorCode::SchemaError, where + ": empty extent");
  return c;
}

// ---------------------------------------------------------------------------
// augment

struct AugmentOptions {
  std::string pipeline_path, preset, in, out;
  std::vector<std::size_t> target{96, 128, 128};
  std::uint64_t index = 0;
};

ordered_json fired_json(const Pipeline& pipe, const std::vector<std::size_t>& fired) {
  ordered_json list = ordered_json::array();
  for (std::size_t k : fired) list.push_back({{"step", k}, {"op", transform_name(pipe.steps()[k].id())}});
  return list;
}

int run_augment(const AugmentOptions& o, const Globals& g, std::ostream& out, std::ostream& err) {
  std::optional<Pipeline> pipe;
  if (!o.pipeline_path.empty()) {
    try {
      pipe = parse_pipeline(io::read_text(o.pipeline_path));
    } catch (const Error& e) {
      if (e.code() == ErrorCode::IoError) throw;
      throw e.with_context(o.pipeline_path);
    }
    if (g.seed_given) pipe = pipe->with_seed(g.seed);
  } else {
    const std::array<std::size_t, 3> target{o.target[0], o.target[1], o.target[2]};
    pipe = o.preset == "heavy" ? preset_heavy_augs(target, g.seed) : preset_mirror3(target, g.seed);
  }

  const fs::path in(o.in);
  std::error_code ec;
  if (!fs::is_directory(in, ec) || io::is_png_stack(in)) {
    const AppliedPipeline r = apply_traced(*pipe, read_volume(in), o.index);
    io::write_vox1(o.out, r.volume);
    ordered_json j = {{"input", in.string()}, {"index", o.index}, {"fired", fired_json(*pipe, r.fired)}};
    out << j.dump() << "\n";
    return 0;
  }

  // Directory of VOX1 files: sample index = lexicographic rank, so results do not depend on --threads.
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(in))
    if (entry.is_regular_file() && entry.path().extension() == ".vox") files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  const fs::path out_dir(o.out);
  fs::create_directories(out_dir, ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot create '" + out_dir.string() + "': " + ec.message());

  std::vector<std::vector<std::size_t>> fired(files.size());
  std::vector<std::optional<Error>> errors(files.size());
  std::atomic<std::size_t> next{0}, done{0};
  std::mutex log_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < files.size(); i = next++) {
      try {
        AppliedPipeline r = apply_traced(*pipe, io::read_vox1(files[i]), i);
        io::write_vox1(out_dir / files[i].filename(), r.volume);
        fired[i] = std::move(r.fired);
      } catch (const Error& e) {
        errors[i] = e;
      }
      const std::size_t n = ++done;
      if (!g.quiet) {
        std::lock_guard lock(log_mutex);
        err << "augment: " << n << "/" << files.size() << "\n";
      }
    }
  };
  const unsigned n_threads = std::max(1u, std::min<unsigned>(g.threads, static_cast<unsigned>(files.size())));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < n_threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  for (const auto& e : errors)
    if (e) throw *e;
  for (std::size_t i = 0; i < files.size(); ++i) {
    ordered_json j = {{"input", files[i].string()}, {"index", i}, {"fired", fired_json(*pipe, fired[i])}};
    out << j.dump() << "\n";
  }
  return 0;
}

// ---------------------------------------------------------------------------
// inflate

struct InflateOptions {
  std::string in, out, rules, mode = "center";
  std::size_t depth = 3;
};

inflate::InflationMode mode_from(const std::string& s) {
  return s == "average" ? inflate::InflationMode::Averaged : inflate::InflationMode::CenterPlane;
}

/// Escapes glob metacharacters so a tensor name matches only itself.
std::string glob_literal(const std::string& name) {
  std::string out;
  for (char ch : name) {
    if (ch == '*' || ch == '?' || ch == '[' || ch == ']' || ch == '\\') out += '\\';
    out += ch;
  }
  return out;
}

std::vector<inflate::InflationRule> parse_rules(const fs::path& path, const InflateOptions& o) {
  const ordered_json j = parse_json_file(path);
  if (!j.is_array()) throw Error(ErrorCode::SchemaError, path.string() + ": rules must be a JSON array");
  std::vector<inflate::InflationRule> rules;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const auto& r = j[i];
    const auto where = path.string() + ": rule " + std::to_string(i);
    if (!r.is_object()) throw Error(ErrorCode::SchemaError, where + ": must be an object");
    for (const auto& [k, _] : r.items())
      if (k != "pattern" && k != "depth" && k != "mode") throw Error(ErrorCode::SchemaError, where + ", field '" + k + "': unknown field");
    if (!r.contains("pattern") || !r["pattern"].is_string())
      throw Error(ErrorCode::SchemaError, where + ", field 'pattern': required string");
    inflate::InflationRule rule{r["pattern"].get<std::string>(), o.depth, mode_from(o.mode)};
    if (r.contains("depth")) {
      if (!r["depth"].is_number_unsigned() || r["depth"].get<std::uint64_t>() == 0)
        throw Error(ErrorCode::SchemaError, where + ", field 'depth': must be a positive integer");
      rule.depth = r["depth"].get<std::size_t>();
    }
    if (r.contains("mode")) {
      const auto m = r["mode"].is_string() ? r["mode"].get<std::string>() : "";
      if (m != "center" && m != "average") throw Error(ErrorCode::SchemaError, where + ", field 'mode': must be \"center\" or \"average\"");
      rule.mode = mode_from(m);
    }
    rules.push_back(std::move(rule));
  }
  return rules;
}

int run_inflate(const InflateOptions& o, std::ostream& out) {
  const io::Bytes input = io::read_file(o.in);
  TensorMap tensors;
  try {
    tensors = io::decode_tmap(input);
  } catch (const Error& e) {
    throw e.with_context(o.in);
  }
  std::vector<inflate::InflationRule> rules;
  if (!o.rules.empty()) {
    rules = parse_rules(o.rules, o);
  } else {
    // Without a rules file every rank-4 tensor is inflated with --mode/--depth.
    for (const auto& [name, t] : tensors)
      if (t.shape.size() == 4) rules.push_back({glob_literal(name), o.depth, mode_from(o.mode)});
  }
  std::vector<inflate::InflatedTensor> report;
  const TensorMap result = inflate::inflate_map(tensors, rules, &report);
  if (report.empty())
    io::write_file(o.out, input);  // nothing matched: pass the container through untouched
  else
    io::write_tmap(o.out, result);
  out << "tensor,old_shape,new_shape\n";
  for (const auto& r : report) out << r.name << "," << shape_string(r.old_shape) << "," << shape_string(r.new_shape) << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// eval / calibrate / uncertainty

ordered_json confusion_json(const metrics::Confusion& c) {
  return {{"tp", c.tp}, {"fp", c.fp}, {"tn", c.tn}, {"fn", c.fn}};
}

struct EvalOptions {
  std::vector<std::string> preds;
  bool folds = false;
  double threshold = 0.5;
};

int run_eval(const EvalOptions& o, std::ostream& out) {
  std::vector<PredictionSet> models;
  for (const auto& p : o.preds) models.push_back(io::read_predictions(p));
  const PredictionSet merged = models.size() == 1 ? models.front() : metrics::fold_mean(models);

  ordered_json j;
  if (o.folds) {
    const auto per_fold = metrics::split_by_fold(merged);
    const auto s = metrics::pooled_cv(per_fold, o.threshold);
    j = {{"mcc", s.mcc}, {"auc", s.auc}, {"tpr", metrics::tpr(s.confusion)}, {"fpr", metrics::fpr(s.confusion)},
         {"confusion", confusion_json(s.confusion)}, {"folds", per_fold.size()}};
  } else {
    const auto c = metrics::confusion(merged, o.threshold);
    const double auc = metrics::roc_auc(merged);  // may throw; keep it out of the initializer list
    j = {{"mcc", metrics::mcc(c)}, {"auc", auc}, {"tpr", metrics::tpr(c)},
         {"fpr", metrics::fpr(c)}, {"confusion", confusion_json(c)}};
  }
  if (models.size() > 1) j["models"] = models.size();
  out << j.dump() << "\n";
  return 0;
}

struct CalibrateOptions {
  std::string pred, out, out_calibrated;
  std::size_t bins = 10;
};

int run_calibrate(const CalibrateOptions& o, const Globals& g, std::ostream& out) {
  const PredictionSet p = io::read_predictions(o.pred);
  const auto bins = reliability::reliability_bins(p, o.bins);
  RandomStream rng(g.seed);
  const auto split = reliability::calibrate_split(p, rng);
  if (!o.out.empty()) io::write_text(o.out, io::format_reliability(bins));
  if (!o.out_calibrated.empty()) io::write_text(o.out_calibrated, io::format_predictions(split.calibrated));
  ordered_json j = {{"n", p.size()},
                    {"holdout", split.holdout.size()},
                    {"bins", o.bins},
                    {"ece_before", reliability::calibration_error(split.holdout, o.bins)},
                    {"ece_after", reliability::calibration_error(split.calibrated, o.bins)}};
  out << j.dump() << "\n";
  return 0;
}

struct UncertaintyOptions {
  std::string probmat, out, spread = "std";
};

int run_uncertainty(const UncertaintyOptions& o, std::ostream& out) {
  const auto m = io::read_probmatrix(o.probmat);
  const auto measure = o.spread == "range" ? reliability::SpreadMeasure::Range : reliability::SpreadMeasure::StdDev;
  const auto stats = reliability::mc_dropout_stats(m, measure);
  if (!o.out.empty()) {
    std::string csv = "sample_id,label,mean,std,range\n";
    for (std::size_t r = 0; r < m.rows(); ++r) {
      const auto& s = stats.samples[r];
      csv += m.ids[r] + "," + std::to_string(m.labels[r]) + "," + io::format_double(s.mean) + "," +
             io::format_double(s.std) + "," + io::format_double(s.range) + "\n";
    }
    io::write_text(o.out, csv);
  }
  auto cls = [](const reliability::ClassSpread& c) {
    return ordered_json{{"count", c.count}, {"mean_spread", c.mean_spread}, {"std_spread", c.std_spread}};
  };
  ordered_json j = {{"spread", o.spread}, {"passes", m.columns}, {"negative", cls(stats.negative)}, {"positive", cls(stats.positive)}};
  out << j.dump() << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// roi / roi-stats

struct RoiOptions {
  std::string frames, out, cuboid;
  std::size_t pad = 8;
  roi::ColorRule rule;
};

int run_roi(const RoiOptions& o, std::ostream& out) {
  o.rule.validate();
  const Volume v = read_volume(o.frames);
  const Cuboid c = roi::roi_cuboid(v, o.rule, o.pad);
  const ordered_json j = cuboid_json(c);
  if (!o.out.empty()) io::write_vox1(o.out, crop(v, c));
  if (!o.cuboid.empty()) io::write_text(o.cuboid, j.dump(2) + "\n");
  out << j.dump() << "\n";
  return 0;
}

struct RoiStatsOptions {
  std::string cuboids, out;
  std::size_t bin_width = 4;
};

int run_roi_stats(const RoiStatsOptions& o, std::ostream& out) {
  const ordered_json j = parse_json_file(o.cuboids);
  if (!j.is_array()) throw Error(ErrorCode::SchemaError, o.cuboids + ": expected a JSON array of cuboids");
  std::vector<Cuboid> list;
  for (std::size_t i = 0; i < j.size(); ++i) list.push_back(cuboid_from_json(j[i], i));
  const auto s = roi::roi_stats(list, o.bin_width);
  if (!o.out.empty()) io::write_text(o.out, roi::histogram_csv(s));
  auto axis = [](const roi::AxisStats& a) {
    return ordered_json{{"mean", a.mean}, {"variance", a.variance}, {"min", a.min}, {"max", a.max},
                        {"p05", a.p05},   {"p25", a.p25},           {"p50", a.p50}, {"p75", a.p75}, {"p95", a.p95}};
  };
  out << ordered_json{{"count", s.count}, {"frames", axis(s.frames)}, {"rows", axis(s.rows)}, {"cols", axis(s.cols)}}.dump() << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// heatmap

struct HeatmapOptions {
  std::string features, input, out, heatmap_out;
  bool png = false;
  double alpha = 0.5;
  std::size_t factor = 32;
};

ordered_json shape_json(const Shape& s) { return {s.frames, s.height, s.width, s.channels}; }

int run_heatmap(const HeatmapOptions& o, std::ostream& out) {
  const auto fv = io::read_features(o.features);
  const Volume input = read_volume(o.input);
  const Volume hm = heatmap::to_rgb(heatmap::reduce_channels(fv));
  const Volume overlay = heatmap::upscale_overlay(hm, input, o.factor, o.alpha);
  if (o.png)
    io::write_png_stack(o.out, overlay);
  else
    io::write_vox1(o.out, overlay);
  if (!o.heatmap_out.empty()) io::write_vox1(o.heatmap_out, hm);
  const ordered_json j = {{"features", {fv.frames, fv.height, fv.width, fv.channels}},
                          {"heatmap", shape_json(hm.shape())},
                          {"overlay", shape_json(overlay.shape())}};
  out << j.dump() << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// sample

struct SampleOptions {
  std::string labels;
  std::size_t batch_size = 8, n = 1;
  double pos_frac = 0.25;
};

/// CSV with a header containing a `label` column; other columns are ignored.
std::vector<std::uint8_t> read_labels(const fs::path& path) {
  const std::string text = io::read_text(path);
  std::vector<std::uint8_t> labels;
  std::size_t pos = 0, line_no = 0;
  std::optional<std::size_t> column;
  std::size_t n_fields = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string::npos) end = text.size();
    std::string line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto where = path.string() + ": line " + std::to_string(line_no);
    if (line.empty()) throw Error(ErrorCode::SchemaError, where + ": blank line");
    std::vector<std::string> fields;
    std::size_t start = 0;
    for (std::size_t c; (c = line.find(',', start)) != std::string::npos; start = c + 1) fields.push_back(line.substr(start, c - start));
    fields.push_back(line.substr(start));
    if (!column) {
      const auto it = std::find(fields.begin(), fields.end(), "label");
      if (it == fields.end()) throw Error(ErrorCode::SchemaError, where + ": header has no 'label' column");
      column = static_cast<std::size_t>(it - fields.begin());
      n_fields = fields.size();
      continue;
    }
    if (fields.size() != n_fields) throw Error(ErrorCode::SchemaError, where + ": wrong number of fields");
    const auto& f = fields[*column];
    if (f != "0" && f != "1") throw Error(ErrorCode::SchemaError, where + ": label '" + f + "' must be 0 or 1");
    labels.push_back(f == "1" ? 1 : 0);
  }
  if (!column) throw Error(ErrorCode::SchemaError, path.string() + ": missing header");
  return labels;
}

int run_sample(const SampleOptions& o, const Globals& g, std::ostream& out) {
  sampler::SamplerConfig cfg{o.batch_size, o.pos_frac, read_labels(o.labels), g.seed};
  sampler::BalancedSampler s(std::move(cfg));
  for (std::size_t b = 0; b < o.n; ++b) {
    const auto batch = s.next_batch();
    for (std::size_t i = 0; i < batch.size(); ++i) out << (i ? "," : "") << batch[i];
    out << "\n";
  }
  return 0;
}

unsigned default_threads() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"voxflow: volumetric augmentation, weight inflation and evaluation toolkit", "voxflow"};
  app.footer(kExitCodes);
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  g.threads = default_threads();
  auto* seed_opt = app.add_option("--seed", g.seed, "Random seed (default 0; overrides a pipeline file's seed)");
  app.add_option("--threads", g.threads, "Worker threads for directory inputs")
      ->envname("VOXFLOW_THREADS")
      ->check(CLI::PositiveNumber);
  app.add_flag("--quiet", g.quiet, "Suppress progress lines on stderr");

  AugmentOptions aug;
  auto* augment = app.add_subcommand("augment", "Apply an augmentation pipeline to a volume or a directory of volumes");
  auto* pipe_opt = augment->add_option("--pipeline", aug.pipeline_path, "Pipeline JSON file");
  auto* preset_opt = augment->add_option("--preset", aug.preset, "Built-in pipeline")->check(CLI::IsMember({"heavy", "mirror3"}));
  pipe_opt->excludes(preset_opt);
  augment->add_option("--target", aug.target, "Preset resize target F,H,W")->delimiter(',')->expected(3);
  augment->add_option("--in", aug.in, "VOX1 file, PNG stack directory, or directory of .vox files")->required();
  augment->add_option("--out", aug.out, "Output VOX1 file (or directory for directory input)")->required();
  augment->add_option("--index", aug.index, "Sample index for single-file input");

  InflateOptions inf;
  auto* inflate_cmd = app.add_subcommand("inflate", "Inflate 2D convolution kernels in a TMAP container to 3D");
  inflate_cmd->add_option("--in", inf.in, "Input TMAP")->required();
  inflate_cmd->add_option("--out", inf.out, "Output TMAP")->required();
  inflate_cmd->add_option("--rules", inf.rules, "JSON list of {pattern, depth?, mode?}; default inflates every rank-4 tensor");
  inflate_cmd->add_option("--mode", inf.mode, "Default inflation mode")->check(CLI::IsMember({"center", "average"}));
  inflate_cmd->add_option("--depth", inf.depth, "Default depth")->check(CLI::PositiveNumber);

  EvalOptions ev;
  auto* eval = app.add_subcommand("eval", "Confusion, MCC, AUC, TPR and FPR of a prediction CSV");
  eval->add_option("--pred", ev.preds, "Prediction CSV; repeat to average models")->required();
  eval->add_flag("--folds", ev.folds, "Pool per-fold confusions using the fold column");
  eval->add_option("--threshold", ev.threshold, "Decision threshold")->check(CLI::Range(0.0, 1.0));

  CalibrateOptions cal;
  auto* calibrate = app.add_subcommand("calibrate", "Isotonic calibration on a random half split");
  calibrate->add_option("--pred", cal.pred, "Prediction CSV")->required();
  calibrate->add_option("--bins", cal.bins, "Reliability bins")->check(CLI::Range(2, 1000000));
  calibrate->add_option("--out", cal.out, "Reliability CSV of the input scores");
  calibrate->add_option("--out-calibrated", cal.out_calibrated, "Calibrated hold-out predictions CSV");

  UncertaintyOptions unc;
  auto* uncertainty = app.add_subcommand("uncertainty", "MC-dropout spread statistics from a probability matrix");
  uncertainty->add_option("--probmat", unc.probmat, "Probability matrix CSV")->required();
  uncertainty->add_option("--spread", unc.spread, "Spread measure")->check(CLI::IsMember({"std", "range"}));
  uncertainty->add_option("--out", unc.out, "Per-sample CSV");

  RoiOptions ro;
  auto* roi_cmd = app.add_subcommand("roi", "Locate the orange annotation and crop its cuboid");
  roi_cmd->add_option("--frames", ro.frames, "RGB PNG stack directory or VOX1 file")->required();
  roi_cmd->add_option("--out", ro.out, "Cropped VOX1 output");
  roi_cmd->add_option("--cuboid", ro.cuboid, "Cuboid JSON output");
  roi_cmd->add_option("--pad", ro.pad, "Padding in pixels around the contour");
  roi_cmd->add_option("--hue-lo", ro.rule.hue_lo, "Lower hue bound in degrees");
  roi_cmd->add_option("--hue-hi", ro.rule.hue_hi, "Upper hue bound in degrees");
  roi_cmd->add_option("--sat-min", ro.rule.sat_min, "Minimum saturation");
  roi_cmd->add_option("--val-min", ro.rule.val_min, "Minimum value");

  RoiStatsOptions rs;
  auto* roi_stats = app.add_subcommand("roi-stats", "Size statistics over a JSON list of cuboids");
  roi_stats->add_option("--cuboids", rs.cuboids, "JSON array of {f0,f1,r0,r1,c0,c1}")->required();
  roi_stats->add_option("--bin-width", rs.bin_width, "Histogram bin width")->check(CLI::PositiveNumber);
  roi_stats->add_option("--out", rs.out, "Histogram CSV");

  HeatmapOptions hm;
  auto* heat = app.add_subcommand("heatmap", "Compile a feature volume into an RGB overlay");
  heat->add_option("--features", hm.features, "float32 VOX1 feature volume")->required();
  heat->add_option("--input", hm.input, "Input VOX1 or PNG stack")->required();
  heat->add_option("--out", hm.out, "Overlay output (VOX1, or PNG stack with --png)")->required();
  heat->add_option("--heatmap-out", hm.heatmap_out, "Low-resolution RGB heatmap VOX1");
  heat->add_flag("--png", hm.png, "Write the overlay as a PNG stack directory");
  heat->add_option("--alpha", hm.alpha, "Heatmap weight in the blend")->check(CLI::Range(0.0, 1.0));
  heat->add_option("--factor", hm.factor, "Upscale factor")->check(CLI::PositiveNumber);

  SampleOptions so;
  auto* sample = app.add_subcommand("sample", "Emit class-balanced batches of sample indices");
  sample->add_option("--labels", so.labels, "CSV with a label column")->required();
  sample->add_option("--batch-size", so.batch_size, "Batch size")->check(CLI::PositiveNumber);
  sample->add_option("--pos-frac", so.pos_frac, "Fraction of positives per batch")->check(CLI::Range(0.0, 1.0));
  sample->add_option("--n", so.n, "Number of batches");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return e.get_exit_code() == 0 ? 0 : 1;
  }
  g.seed_given = seed_opt->count() > 0;

  try {
    if (augment->parsed()) {
      if (aug.pipeline_path.empty() && aug.preset.empty()) {
        err << "augment: one of --pipeline or --preset is required\n";
        return 1;
      }
      if (std::find(aug.target.begin(), aug.target.end(), 0) != aug.target.end()) {
        err << "augment: --target extents must be positive\n";
        return 1;
      }
      return run_augment(aug, g, out, err);
    }
    if (inflate_cmd->parsed()) return run_inflate(inf, out);
    if (eval->parsed()) return run_eval(ev, out);
    if (calibrate->parsed()) return run_calibrate(cal, g, out);
    if (uncertainty->parsed()) return run_uncertainty(unc, out);
    if (roi_cmd->parsed()) return run_roi(ro, out);
    if (roi_stats->parsed()) return run_roi_stats(rs, out);
    if (heat->parsed()) return run_heatmap(hm, out);
    if (sample->parsed()) return run_sample(so, g, out);
  } catch (const Error& e) {
    err << "voxflow: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const fs::filesystem_error& e) {
    err << "voxflow: IoError: " << e.what() << "\n";
    return 2;
  } catch (const std::bad_alloc&) {
    err << "voxflow: out of memory\n";
    return 2;
  }
  return 1;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv{"voxflow"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace voxflow::cli
