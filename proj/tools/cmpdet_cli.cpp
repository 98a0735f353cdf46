// cmpdet: checkerboard-corner detection for deformable continuous marker
// patterns. Subcommands: detect, synth, eval, bench, curves.

#include <algorithm>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "cmpdet/evalbench.hpp"
#include "cmpdet/image.hpp"
#include "cmpdet/jsonout.hpp"
#include "cmpdet/pipeline.hpp"
#include "cmpdet/spectral.hpp"
#include "cmpdet/synth.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr double kPi = std::numbers::pi;

int default_threads() {
  unsigned n = std::thread::hardware_concurrency();
  return n == 0 ? 1 : static_cast<int>(n);
}

// Flags shared by every subcommand that runs the detection pipeline.
struct PipelineFlags {
  int window = 31;
  int offset = 0;
  int delta_th = 5;
  int d_th = 5;
  int cd_th = 4;
  int nms_radius = 3;
  int threads = default_threads();
};

void add_pipeline_flags(CLI::App* cmd, PipelineFlags& f) {
  cmd->add_option("--window", f.window, "Adaptive threshold window (odd)")
      ->check(CLI::Range(3, 4095));
  cmd->add_option("--offset", f.offset, "Threshold offset")
      ->check(CLI::Range(-64, 64));
  cmd->add_option("--delta-th", f.delta_th, "Sector difference threshold")
      ->check(CLI::Range(1, 16));
  cmd->add_option("--d-th", f.d_th, "XOR distance threshold")
      ->check(CLI::Range(0, 16));
  cmd->add_option("--cd-th", f.cd_th, "Corrosion degree threshold")
      ->check(CLI::Range(0, 32));
  cmd->add_option("--nms-radius", f.nms_radius, "Suppression radius (px)")
      ->check(CLI::Range(1, 64));
  cmd->add_option("--threads", f.threads, "Worker threads")
      ->check(CLI::Range(1, 256));
}

cmpdet::PipelineParams to_params(const PipelineFlags& f) {
  cmpdet::PipelineParams p;
  p.window = f.window;
  p.offset = f.offset;
  p.detector = {f.delta_th, f.d_th, f.cd_th, f.nms_radius};
  p.threads = f.threads;
  if (f.window % 2 == 0)
    throw std::invalid_argument("--window must be odd");
  return p;
}

// Detection parameters serialized into reports; thread count is excluded so
// output bytes do not depend on the host.
json params_json(const cmpdet::PipelineParams& p) {
  json j;
  j["window"] = p.window;
  j["offset"] = p.offset;
  j["delta_th"] = p.detector.delta_th;
  j["d_th"] = p.detector.d_th;
  j["cd_th"] = p.detector.cd_th;
  j["nms_radius"] = p.detector.nms_radius;
  return j;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw std::runtime_error("write failed: " + path);
}

void emit(const std::string& out_path, const std::string& text) {
  if (out_path.empty())
    std::fputs(text.c_str(), stdout);
  else
    write_text(out_path, text);
}

// Synthesis flags shared by `synth` and inline recipe parsing.
struct SynthFlags {
  int grid = 20;
  int cell_px = 16;
  std::string deform = "none";
  double amplitude = 0.0;
  double center_u = 0.5;
  double center_v = 0.5;
  double radius = 0.25;
  double corrosion = 0.0;
  double noise = 0.0;
  double ramp = 0.0;
  std::uint64_t seed = 1;
  int width = 0;
  int height = 0;
};

cmpdet::DeformMode parse_mode(const std::string& s) {
  if (s == "none") return cmpdet::DeformMode::none;
  if (s == "press") return cmpdet::DeformMode::press;
  if (s == "shear") return cmpdet::DeformMode::shear;
  if (s == "twist") return cmpdet::DeformMode::twist;
  throw std::invalid_argument("unknown deform mode: " + s);
}

void add_synth_flags(CLI::App* cmd, SynthFlags& f) {
  cmd->add_option("--grid", f.grid, "Cells per side")->check(CLI::Range(2, 512));
  cmd->add_option("--cell-px", f.cell_px, "Pixels per cell")
      ->check(CLI::Range(8, 256));
  cmd->add_option("--deform", f.deform, "Deformation mode")
      ->check(CLI::IsMember({"none", "press", "shear", "twist"}));
  cmd->add_option("--amplitude", f.amplitude, "Peak displacement (px)")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--center-u", f.center_u, "Deformation center u (0..1)");
  cmd->add_option("--center-v", f.center_v, "Deformation center v (0..1)");
  cmd->add_option("--radius", f.radius, "Deformation sigma (normalized)")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--corrosion", f.corrosion, "Corner blur-disk radius (px)")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--noise", f.noise, "Gaussian noise sigma")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--ramp", f.ramp, "Illumination slope per px");
  cmd->add_option("--seed", f.seed, "Noise seed");
  cmd->add_option("--width", f.width, "Canvas width (0: fit grid)");
  cmd->add_option("--height", f.height, "Canvas height (0: fit grid)");
}

cmpdet::SynthConfig to_config(const SynthFlags& f) {
  cmpdet::SynthConfig cfg;
  cfg.grid = f.grid;
  cfg.cell_px = f.cell_px;
  cfg.deform = {parse_mode(f.deform), f.amplitude, f.center_u, f.center_v,
                f.radius};
  cfg.corrosion_radius = f.corrosion;
  cfg.noise_sigma = f.noise;
  cfg.illumination_ramp = f.ramp;
  cfg.seed = f.seed;
  cfg.width = f.width;
  cfg.height = f.height;
  return cfg;
}

cmpdet::SynthConfig config_from_json(const json& e) {
  cmpdet::SynthConfig cfg;
  cfg.grid = e.value("grid", 20);
  cfg.cell_px = e.value("cell_px", 16);
  if (e.contains("deform")) {
    const json& d = e["deform"];
    cfg.deform.mode = parse_mode(d.value("mode", "none"));
    cfg.deform.amplitude = d.value("amplitude", 0.0);
    cfg.deform.center_u = d.value("center_u", 0.5);
    cfg.deform.center_v = d.value("center_v", 0.5);
    cfg.deform.radius = d.value("radius", 0.25);
  }
  cfg.corrosion_radius = e.value("corrosion_radius", 0.0);
  cfg.noise_sigma = e.value("noise_sigma", 0.0);
  cfg.illumination_ramp = e.value("illumination_ramp", 0.0);
  cfg.seed = e.value("seed", std::uint64_t{1});
  cfg.width = e.value("width", 0);
  cfg.height = e.value("height", 0);
  return cfg;
}

void draw_cross(cmpdet::GrayImage& img, int cx, int cy) {
  for (int d = -3; d <= 3; ++d) {
    if (img.in_bounds(cx + d, cy))
      img.at(cx + d, cy) = static_cast<std::uint8_t>(255 - img.at(cx + d, cy));
    if (d != 0 && img.in_bounds(cx, cy + d))
      img.at(cx, cy + d) = static_cast<std::uint8_t>(255 - img.at(cx, cy + d));
  }
}

// ---------------------------------------------------------------- detect --

int run_detect(const std::string& input, const PipelineFlags& flags,
               const std::string& out_path, const std::string& annotate) {
  cmpdet::PipelineParams params = to_params(flags);
  cmpdet::GrayImage img = cmpdet::load_pgm(input);
  cmpdet::DetectResult result = cmpdet::detect_corners(img, params);

  json doc;
  doc["width"] = result.width;
  doc["height"] = result.height;
  doc["params"] = params_json(params);
  json corners = json::array();
  for (const cmpdet::Corner& c : result.corners) {
    json e;
    e["x"] = c.x;
    e["y"] = c.y;
    e["response"] = c.response;
    e["method"] = cmpdet::refine_method_name(c.method);
    corners.push_back(std::move(e));
  }
  doc["corners"] = std::move(corners);
  emit(out_path, cmpdet::dump_stable(doc));

  if (!annotate.empty()) {
    cmpdet::GrayImage marked = img;
    for (const cmpdet::Corner& c : result.corners)
      draw_cross(marked, static_cast<int>(std::lround(c.x)),
                 static_cast<int>(std::lround(c.y)));
    cmpdet::save_pgm(marked, annotate);
  }
  return 0;
}

// ----------------------------------------------------------------- synth --

int run_synth(const SynthFlags& flags, const std::string& out_path,
              std::string truth_path) {
  cmpdet::SynthConfig cfg = to_config(flags);
  cmpdet::SynthResult result = cmpdet::generate(cfg);
  cmpdet::save_pgm(result.image, out_path);

  if (truth_path.empty()) {
    truth_path = out_path;
    if (truth_path.size() > 4 &&
        truth_path.compare(truth_path.size() - 4, 4, ".pgm") == 0)
      truth_path.resize(truth_path.size() - 4);
    truth_path += ".truth.json";
  }
  write_text(truth_path,
             cmpdet::dump_stable(cmpdet::truth_to_json(
                 result.truth, result.image.width, result.image.height)));

  std::printf("synth: wrote %s (%dx%d) and %s (%zu corners)\n",
              out_path.c_str(), result.image.width, result.image.height,
              truth_path.c_str(), result.truth.corners.size());
  return 0;
}

// ------------------------------------------------------------------ eval --

struct LoadedDataset {
  std::vector<cmpdet::EvalFrame> frames;
  json errors = json::array();
};

LoadedDataset load_dir(const std::string& dir) {
  LoadedDataset ds;
  std::vector<fs::path> pgms;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".pgm")
      pgms.push_back(entry.path());
  std::sort(pgms.begin(), pgms.end());

  for (const fs::path& p : pgms) {
    fs::path truth = p;
    truth.replace_extension("");
    truth += ".truth.json";
    try {
      cmpdet::EvalFrame f;
      f.name = p.filename().string();
      f.image = cmpdet::load_pgm(p.string());
      std::ifstream in(truth);
      if (!in)
        throw std::runtime_error("missing truth sidecar: " +
                                 truth.filename().string());
      json tj = json::parse(in);
      f.truth = cmpdet::truth_from_json(tj);
      ds.frames.push_back(std::move(f));
    } catch (const std::exception& e) {
      json err;
      err["name"] = p.filename().string();
      err["error"] = e.what();
      ds.errors.push_back(std::move(err));
    }
  }
  return ds;
}

LoadedDataset load_recipe(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open recipe: " + path);
  json recipe = json::parse(in);

  LoadedDataset ds;
  for (const json& e : recipe.at("frames")) {
    cmpdet::SynthConfig cfg = config_from_json(e);
    cmpdet::SynthResult r = cmpdet::generate(cfg);
    char name[96];
    std::snprintf(name, sizeof(name), "synth-%s-grid%d-seed%llu",
                  cmpdet::deform_mode_name(cfg.deform.mode), cfg.grid,
                  static_cast<unsigned long long>(cfg.seed));
    ds.frames.push_back({name, std::move(r.image), std::move(r.truth)});
  }
  return ds;
}

int run_eval(const std::string& dir, const std::string& recipe,
             const PipelineFlags& flags, double tolerance, bool literal,
             const std::string& out_path, const std::string& csv_path) {
  cmpdet::PipelineParams params = to_params(flags);
  LoadedDataset ds = dir.empty() ? load_recipe(recipe) : load_dir(dir);
  if (ds.frames.empty()) {
    std::fprintf(stderr, "eval: no usable frames\n");
    return 2;
  }

  cmpdet::EvalReport rep =
      cmpdet::evaluate(ds.frames, params, tolerance, literal);

  json doc;
  doc["afp"] = rep.afp;
  doc["afn"] = rep.afn;
  doc["sr"] = rep.sr;
  doc["tolerance"] = tolerance;
  doc["params"] = params_json(params);
  json frames = json::array();
  for (const cmpdet::FrameStats& f : rep.frames) {
    json e;
    e["name"] = f.name;
    e["tp"] = f.tp;
    e["fp"] = f.fp;
    e["fn"] = f.fn;
    e["success"] = f.success;
    frames.push_back(std::move(e));
  }
  doc["frames"] = std::move(frames);
  if (!ds.errors.empty()) doc["errors"] = ds.errors;
  emit(out_path, cmpdet::dump_stable(doc));

  if (!csv_path.empty()) {
    std::string csv = "name,tp,fp,fn,success\n";
    for (const cmpdet::FrameStats& f : rep.frames) {
      char line[160];
      std::snprintf(line, sizeof(line), "%s,%d,%d,%d,%d\n", f.name.c_str(),
                    f.tp, f.fp, f.fn, f.success ? 1 : 0);
      csv += line;
    }
    write_text(csv_path, csv);
  }
  return 0;
}

// ----------------------------------------------------------------- bench --

int run_bench(const std::string& input, const PipelineFlags& flags,
              int repetitions, int warmup, const std::string& out_path) {
  cmpdet::PipelineParams params = to_params(flags);
  cmpdet::GrayImage img = cmpdet::load_pgm(input);
  cmpdet::BenchReport rep =
      cmpdet::bench(img, params, repetitions, flags.threads, warmup);

  json doc;
  doc["repetitions"] = rep.repetitions;
  doc["threads"] = rep.threads;
  doc["corner_count"] = rep.corner_count;
  doc["mean_ms"] = rep.mean_ms;
  doc["median_ms"] = rep.median_ms;
  json samples = json::array();
  for (double s : rep.samples_ms) samples.push_back(s);
  doc["samples_ms"] = std::move(samples);
  emit(out_path, cmpdet::dump_stable(doc));
  return 0;
}

// ---------------------------------------------------------------- curves --

void append_row(std::string& csv, const char* fmt, ...) {
  char line[256];
  va_list args;
  va_start(args, fmt);
  std::vsnprintf(line, sizeof(line), fmt, args);
  va_end(args);
  csv += line;
}

cmpdet::RingSignal two_window_signal(int start2, int len2) {
  cmpdet::RingSignal g;
  for (int i = 0; i < 4; ++i) g.set(i, true);
  for (int i = 0; i < len2; ++i) g.set((start2 + i) & 15, true);
  return g;
}

int run_curves(const std::string& out_dir) {
  fs::create_directories(out_dir);
  auto path = [&](const char* name) {
    return (fs::path(out_dir) / name).string();
  };
  std::vector<std::string> written;

  // Amplitude vs frequency as the sector azimuth deviates from opposite.
  {
    std::string csv = "alpha_rad,omega,amplitude\n";
    for (int a = 0; a <= 100; ++a) {
      double alpha = kPi - kPi / 3 + (kPi / 3) * a / 100.0;
      for (int w = 1; w <= 8; ++w)
        append_row(csv, "%.6f,%d,%.6f\n", alpha, w,
                   cmpdet::continuous_amplitude({kPi / 4, kPi / 4, alpha}, w));
    }
    write_text(path("amplitude_vs_azimuth.csv"), csv);
    written.push_back("amplitude_vs_azimuth.csv");
  }

  // Amplitude vs frequency as the sector widths diverge (opposite sectors).
  {
    std::string csv = "delta_rad,omega,amplitude\n";
    for (int d = 0; d <= 100; ++d) {
      double delta = (kPi / 2 - 1e-6) * d / 100.0;
      double t1 = (kPi / 2 + delta) / 2, t2 = (kPi / 2 - delta) / 2;
      for (int w = 1; w <= 8; ++w)
        append_row(csv, "%.6f,%d,%.6f\n", delta, w,
                   cmpdet::continuous_amplitude({t1, t2, kPi}, w));
    }
    write_text(path("amplitude_vs_length.csv"), csv);
    written.push_back("amplitude_vs_length.csv");
  }

  // Amplitude vs frequency as the equal sector width scales.
  {
    std::string csv = "tau_rad,omega,amplitude\n";
    for (int t = 1; t <= 99; ++t) {
      double tau = (kPi / 2) * t / 100.0;
      for (int w = 1; w <= 8; ++w)
        append_row(csv, "%.6f,%d,%.6f\n", tau, w,
                   cmpdet::continuous_amplitude({tau, tau, kPi}, w));
    }
    write_text(path("amplitude_vs_width.csv"), csv);
    written.push_back("amplitude_vs_width.csv");
  }

  // Ratio surface over (tau, alpha), equal widths.
  {
    std::string csv = "tau_rad,alpha_rad,r12,r32,singular\n";
    for (int t = 1; t <= 15; ++t)
      for (int a = 2; a <= 16; ++a) {
        double tau = kPi / 32 * t;
        double alpha = kPi / 16 * a;
        cmpdet::RatioResult r = cmpdet::amplitude_ratios_azimuth(tau, alpha);
        append_row(csv, "%.6f,%.6f,%.6f,%.6f,%d\n", tau, alpha, r.r12, r.r32,
                   r.singular ? 1 : 0);
      }
    write_text(path("ratio_surface_azimuth.csv"), csv);
    written.push_back("ratio_surface_azimuth.csv");
  }

  // Ratio surface over (width sum, width difference), opposite sectors.
  {
    std::string csv = "sum_rad,delta_rad,r12,r32,singular\n";
    for (int s = 2; s <= 14; ++s) {
      double T = kPi / 16 * s;
      double dmax = std::min(T, kPi - T);
      for (int d = 0; d <= 16; ++d) {
        double delta = dmax * d / 16.0 * 0.999;
        cmpdet::RatioResult r = cmpdet::amplitude_ratios_length(T, delta);
        append_row(csv, "%.6f,%.6f,%.6f,%.6f,%d\n", T, delta, r.r12, r.r32,
                   r.singular ? 1 : 0);
      }
    }
    write_text(path("ratio_surface_length.csv"), csv);
    written.push_back("ratio_surface_length.csv");
  }

  const cmpdet::RingSignal ideal = cmpdet::signal_from_string("1111000011110000");

  // Cross-correlation as the second layer rotates against the first.
  {
    std::string csv = "shift,k,correlation,delta_a,delta_phi_deg\n";
    for (int s = 0; s < 16; ++s) {
      cmpdet::RingSignal g2 = cmpdet::rotate_signal(ideal, s);
      auto r = cmpdet::circular_xcorr(ideal, g2);
      cmpdet::InterResponse ir = cmpdet::inter_response(ideal, g2);
      for (int k = 0; k < 16; ++k)
        append_row(csv, "%d,%d,%.6f,%.6f,%.6f\n", s, k, r[k], ir.delta_a,
                   ir.delta_phi);
    }
    write_text(path("xcorr_rotation.csv"), csv);
    written.push_back("xcorr_rotation.csv");
  }

  // Cross-correlation as one black sector drifts in azimuth.
  {
    std::string csv = "deviation,k,correlation,delta_a,delta_phi_deg\n";
    for (int dev = -3; dev <= 3; ++dev) {
      cmpdet::RingSignal g2 = two_window_signal(8 + dev, 4);
      auto r = cmpdet::circular_xcorr(ideal, g2);
      cmpdet::InterResponse ir = cmpdet::inter_response(ideal, g2);
      for (int k = 0; k < 16; ++k)
        append_row(csv, "%d,%d,%.6f,%.6f,%.6f\n", dev, k, r[k], ir.delta_a,
                   ir.delta_phi);
    }
    write_text(path("xcorr_azimuth.csv"), csv);
    written.push_back("xcorr_azimuth.csv");
  }

  // Cross-correlation as one black sector stretches or shrinks.
  {
    std::string csv = "length,k,correlation,delta_a,delta_phi_deg\n";
    for (int len = 1; len <= 7; ++len) {
      cmpdet::RingSignal g2 = two_window_signal(8, len);
      auto r = cmpdet::circular_xcorr(ideal, g2);
      cmpdet::InterResponse ir = cmpdet::inter_response(ideal, g2);
      for (int k = 0; k < 16; ++k)
        append_row(csv, "%d,%d,%.6f,%.6f,%.6f\n", len, k, r[k], ir.delta_a,
                   ir.delta_phi);
    }
    write_text(path("xcorr_length.csv"), csv);
    written.push_back("xcorr_length.csv");
  }

  for (const std::string& name : written)
    std::printf("curves: wrote %s\n", (fs::path(out_dir) / name).c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Corner detection for checkerboard-like tactile marker patterns"};
  app.require_subcommand(1);

  // detect
  auto* detect = app.add_subcommand("detect", "Detect corners in a PGM image");
  std::string detect_input, detect_out, detect_annotate;
  PipelineFlags detect_flags;
  detect->add_option("input", detect_input, "Input PGM image")->required();
  add_pipeline_flags(detect, detect_flags);
  detect->add_option("--out", detect_out, "Write JSON here (default stdout)");
  detect->add_option("--annotate", detect_annotate,
                     "Write an annotated PGM with corner crosses");

  // synth
  auto* synth = app.add_subcommand("synth", "Generate a synthetic frame");
  SynthFlags synth_flags;
  std::string synth_out, synth_truth;
  add_synth_flags(synth, synth_flags);
  synth->add_option("--out", synth_out, "Output PGM path")->required();
  synth->add_option("--truth", synth_truth,
                    "Truth sidecar path (default: <out>.truth.json)");

  // eval
  auto* eval = app.add_subcommand("eval", "Evaluate detection against truth");
  std::string eval_dir, eval_recipe, eval_out, eval_csv;
  PipelineFlags eval_flags;
  double eval_tol = 3.0;
  bool eval_literal = false;
  auto* dir_opt =
      eval->add_option("--dir", eval_dir, "Directory of .pgm + .truth.json");
  eval->add_option("--synth-recipe", eval_recipe,
                   "JSON recipe of synthetic frames")
      ->excludes(dir_opt);
  add_pipeline_flags(eval, eval_flags);
  eval->add_option("--tolerance", eval_tol, "Match tolerance (px)")
      ->check(CLI::PositiveNumber);
  eval->add_flag("--literal-failure", eval_literal,
                 "Fail frames only when fp > 1 or fn > 1");
  eval->add_option("--out", eval_out, "Write report JSON here");
  eval->add_option("--csv", eval_csv, "Write per-frame CSV here");

  // bench
  auto* bench = app.add_subcommand("bench", "Time the pipeline on one frame");
  std::string bench_input, bench_out;
  PipelineFlags bench_flags;
  int bench_reps = 50, bench_warmup = 10;
  bench->add_option("input", bench_input, "Input PGM image")->required();
  add_pipeline_flags(bench, bench_flags);
  bench->add_option("--repetitions", bench_reps, "Timed repetitions")
      ->check(CLI::Range(1, 100000));
  bench->add_option("--warmup", bench_warmup, "Untimed warmup passes")
      ->check(CLI::Range(0, 1000));
  bench->add_option("--out", bench_out, "Write report JSON here");

  // curves
  auto* curves =
      app.add_subcommand("curves", "Emit analytic criterion curves as CSV");
  std::string curves_dir = ".";
  curves->add_option("--out-dir", curves_dir, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (detect->parsed())
      return run_detect(detect_input, detect_flags, detect_out,
                        detect_annotate);
    if (synth->parsed()) return run_synth(synth_flags, synth_out, synth_truth);
    if (eval->parsed()) {
      if (eval_dir.empty() && eval_recipe.empty()) {
        std::fprintf(stderr, "eval: need --dir or --synth-recipe\n");
        return 2;
      }
      return run_eval(eval_dir, eval_recipe, eval_flags, eval_tol,
                      eval_literal, eval_out, eval_csv);
    }
    if (bench->parsed())
      return run_bench(bench_input, bench_flags, bench_reps, bench_warmup,
                       bench_out);
    if (curves->parsed()) return run_curves(curves_dir);
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::runtime_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "internal error: %s\n", e.what());
    return 3;
  }
  return 0;
}
