// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The wfp Authors

#include "wfp/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <set>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "wfp/conv_predictor.hpp"
#include "wfp/demo.hpp"
#include "wfp/image_io.hpp"
#include "wfp/metrics.hpp"
#include "wfp/rng.hpp"
#include "wfp/wavelet.hpp"

namespace wfp {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void reject_unknown(const json& obj, const std::set<std::string>& known,
                    const std::string& where) {
  if (!obj.is_object()) {
    throw UsageError(fmt::format("config: {} must be an object", where));
  }
  for (const auto& item : obj.items()) {
    if (!known.contains(item.key())) {
      throw UsageError(
          fmt::format("config: unknown key '{}' in {}", item.key(), where));
    }
  }
}

template <typename T>
void read(const json& obj, const char* key, T& dst) {
  if (!obj.contains(key)) return;
  const json& v = obj.at(key);
  if constexpr (std::is_same_v<T, std::string>) {
    if (!v.is_string()) {
      throw UsageError(fmt::format("config: '{}' must be a string", key));
    }
  } else if constexpr (std::is_integral_v<T>) {
    if (!v.is_number_integer()) {
      throw UsageError(fmt::format("config: '{}' must be an integer", key));
    }
    if constexpr (std::is_unsigned_v<T>) {
      if (!v.is_number_unsigned()) {
        throw UsageError(fmt::format("config: '{}' must be >= 0", key));
      }
    }
  } else {
    if (!v.is_number()) {
      throw UsageError(fmt::format("config: '{}' must be a number", key));
    }
  }
  dst = v.get<T>();
}

std::uint64_t parse_seed(const std::string& text) {
  std::uint64_t seed = 0;
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, seed);
  if (ec != std::errc() || ptr != last || text.empty()) {
    throw UsageError(fmt::format("WFP_SEED '{}' is not an unsigned integer",
                                 text));
  }
  return seed;
}

void apply_seed_override(EnhanceConfig& cfg) {
  if (const char* env = std::getenv("WFP_SEED")) {
    cfg.seed = parse_seed(env);
  }
}

void write_trace_file(const SamplerTrace& trace, const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(fmt::format("cannot write {}", path.string()));
  write_trace_csv(trace, out);
}

bool is_image_file(const fs::path& p) {
  std::string ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char ch) { return std::tolower(ch); });
  return ext == ".png" || ext == ".pfm";
}

void run_enhance(const fs::path& input, const fs::path& output,
                 const fs::path& config_path,
                 const std::optional<fs::path>& trace_path) {
  CliConfig cfg = load_cli_config(config_path);
  apply_seed_override(cfg.enhance);

  if (!fs::exists(input)) {
    throw IoError(fmt::format("no such input: {}", input.string()));
  }
  const auto predictor = make_predictor(cfg.predictor);
  const MockScorer mock;
  const SemanticScorer* scorer =
      cfg.scorer == ScorerKind::mock ? &mock : nullptr;
  if (cfg.enhance.guidance_weight > 0.0 && scorer == nullptr) {
    throw UsageError("config: guidance_weight > 0 requires scorer type mock");
  }

  if (!fs::is_directory(input)) {
    const ImageBuffer image = load_image(input);
    EnhanceResult result = enhance(image, cfg.enhance, *predictor, scorer);
    save_image(result.image, output);
    if (trace_path) write_trace_file(result.trace, *trace_path);
    return;
  }

  if (trace_path) {
    throw UsageError("--trace is only supported for single-image runs");
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(input)) {
    if (entry.is_regular_file() && is_image_file(entry.path())) {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  std::vector<ImageBuffer> images;
  for (const auto& f : files) images.push_back(load_image(f));

  fs::create_directories(output);
  for (std::size_t i = 0; i < files.size(); ++i) {
    EnhanceConfig per_file = cfg.enhance;
    per_file.seed =
        derive_seed(cfg.enhance.seed, files[i].filename().string());
    EnhanceResult result = enhance(images[i], per_file, *predictor, scorer);
    save_image(result.image, output / files[i].filename());
  }
}

void run_decompose(const fs::path& input, const fs::path& dir) {
  const ImageBuffer image = load_image(input);
  const SubbandSet bands = dwt2(image);
  fs::create_directories(dir);
  write_pfm(bands.ll, dir / "ll.pfm");
  write_pfm(bands.lh, dir / "lh.pfm");
  write_pfm(bands.hl, dir / "hl.pfm");
  write_pfm(bands.hh, dir / "hh.pfm");
}

void run_metrics(const fs::path& a_path, const fs::path& b_path,
                 const std::optional<fs::path>& loe_ref, std::ostream& out) {
  const ImageBuffer a = load_image(a_path);
  const ImageBuffer b = load_image(b_path);
  std::optional<ImageBuffer> reference;
  if (loe_ref) reference = load_image(*loe_ref);

  MetricReport report{psnr(a, b), ssim(a, b), std::nullopt};
  if (reference) report.loe = loe(*reference, a);
  out << fmt::format("{},{:.6f},{:.6f},{}\n", a_path.stem().string(),
                     report.psnr, report.ssim,
                     report.loe ? fmt::format("{:.6f}", *report.loe) : "");
}

void run_demo_command(const std::optional<fs::path>& output,
                      const std::optional<fs::path>& trace_path,
                      std::ostream& out) {
  DemoSettings settings;
  apply_seed_override(settings.config);
  const DemoReport r = run_demo(settings);
  if (output) save_image(r.output, *output);
  if (trace_path) write_trace_file(r.trace, *trace_path);
  out << "metric,value\n"
      << fmt::format("seed,{}\n", settings.config.seed)
      << fmt::format("mean_luminance,{:.6f}\n", r.mean_luminance)
      << fmt::format("e_level,{:.6f}\n", settings.config.e_level)
      << fmt::format("psnr_dark,{:.6f}\n", r.psnr_dark)
      << fmt::format("psnr_output,{:.6f}\n", r.psnr_output)
      << fmt::format("psnr_delta,{:.6f}\n", r.psnr_output - r.psnr_dark)
      << fmt::format("ssim_dark,{:.6f}\n", r.ssim_dark)
      << fmt::format("ssim_output,{:.6f}\n", r.ssim_output)
      << fmt::format("ssim_delta,{:.6f}\n", r.ssim_output - r.ssim_dark)
      << fmt::format("loe_output,{:.6f}\n", r.loe_output)
      << fmt::format("loe_control,{:.6f}\n", r.loe_control);
}

}  // namespace

CliConfig parse_cli_config(const json& doc) {
  static const std::set<std::string> kTop = {
      "T",          "S",          "theta_init",     "theta_lr",
      "e_level",    "guidance_weight", "guidance_probe", "prompts",
      "init_mode",  "guidance_source", "denoise_strength", "seed",
      "beta_start", "beta_end",   "predictor",      "scorer"};
  reject_unknown(doc, kTop, "the top level");

  CliConfig cfg;
  EnhanceConfig& e = cfg.enhance;
  read(doc, "T", e.steps);
  read(doc, "S", e.semantic_interval);
  read(doc, "theta_init", e.theta_init);
  read(doc, "theta_lr", e.theta_lr);
  read(doc, "e_level", e.e_level);
  read(doc, "guidance_weight", e.guidance_weight);
  read(doc, "guidance_probe", e.guidance_probe);
  read(doc, "denoise_strength", e.denoise_strength);
  read(doc, "seed", e.seed);
  if (doc.contains("beta_start")) {
    double v = 0.0;
    read(doc, "beta_start", v);
    e.beta_start = v;
  }
  if (doc.contains("beta_end")) {
    double v = 0.0;
    read(doc, "beta_end", v);
    e.beta_end = v;
  }
  if (doc.contains("prompts")) {
    const json& p = doc.at("prompts");
    reject_unknown(p, {"positive", "negative"}, "prompts");
    read(p, "positive", e.prompts.positive);
    read(p, "negative", e.prompts.negative);
  }
  if (doc.contains("init_mode")) {
    std::string mode;
    read(doc, "init_mode", mode);
    if (mode == "noised-input") {
      e.init_mode = InitMode::noised_input;
    } else if (mode == "pure-noise") {
      e.init_mode = InitMode::pure_noise;
    } else {
      throw UsageError(fmt::format("config: unknown init_mode '{}'", mode));
    }
  }
  if (doc.contains("guidance_source")) {
    std::string source;
    read(doc, "guidance_source", source);
    if (source == "sample") {
      e.guidance_source = GuidanceSource::sample;
    } else if (source == "denoised") {
      e.guidance_source = GuidanceSource::denoised;
    } else {
      throw UsageError(
          fmt::format("config: unknown guidance_source '{}'", source));
    }
  }
  if (doc.contains("predictor")) {
    const json& p = doc.at("predictor");
    if (!p.is_object() || !p.contains("type") || !p.at("type").is_string()) {
      throw UsageError("config: predictor needs a string 'type'");
    }
    const std::string type = p.at("type").get<std::string>();
    if (type == "gaussian") {
      reject_unknown(p, {"type", "m", "s"}, "predictor");
      cfg.predictor.kind = PredictorSpec::Kind::gaussian;
      read(p, "m", cfg.predictor.m);
      read(p, "s", cfg.predictor.s);
      if (!(cfg.predictor.s >= 0.0)) {
        throw UsageError("config: predictor.s must be >= 0");
      }
    } else if (type == "conv") {
      reject_unknown(p, {"type", "weights_path"}, "predictor");
      if (!p.contains("weights_path")) {
        throw UsageError("config: conv predictor needs weights_path");
      }
      std::string path;
      read(p, "weights_path", path);
      cfg.predictor.kind = PredictorSpec::Kind::conv;
      cfg.predictor.weights_path = path;
    } else {
      throw UsageError(fmt::format("config: unknown predictor type '{}'", type));
    }
  }
  if (doc.contains("scorer")) {
    const json& s = doc.at("scorer");
    reject_unknown(s, {"type"}, "scorer");
    std::string type = "none";
    read(s, "type", type);
    if (type == "mock") {
      cfg.scorer = ScorerKind::mock;
    } else if (type == "none") {
      cfg.scorer = ScorerKind::none;
    } else {
      throw UsageError(fmt::format("config: unknown scorer type '{}'", type));
    }
  }

  try {
    e.validate();
  } catch (const ParameterError& ex) {
    throw UsageError(fmt::format("config: {}", ex.what()));
  }
  return cfg;
}

CliConfig load_cli_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError(fmt::format("cannot open config {}", path.string()));
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& ex) {
    throw UsageError(fmt::format("config {}: {}", path.string(), ex.what()));
  }
  return parse_cli_config(doc);
}

std::unique_ptr<NoisePredictor> make_predictor(const PredictorSpec& spec) {
  switch (spec.kind) {
    case PredictorSpec::Kind::gaussian:
      return std::make_unique<GaussianPriorPredictor>(spec.m, spec.s);
    case PredictorSpec::Kind::conv:
      return std::make_unique<ConvPredictor>(
          load_predictor_weights(spec.weights_path));
  }
  throw UsageError("unknown predictor kind");
}

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Zero-shot low-light enhancement with joint wavelet/Fourier "
               "priors",
               "wfp"};
  app.require_subcommand(1);

  std::string input;
  std::string output;
  std::string config;
  std::string trace;
  auto* enhance_cmd = app.add_subcommand("enhance", "Enhance an image or a "
                                                    "directory of images");
  enhance_cmd->add_option("-i,--input", input, "Input image or directory")
      ->required();
  enhance_cmd->add_option("-o,--output", output, "Output image or directory")
      ->required();
  enhance_cmd->add_option("-c,--config", config, "JSON configuration")
      ->required();
  enhance_cmd->add_option("--trace", trace, "Per-step trace CSV");

  std::string decompose_in;
  std::string decompose_dir;
  auto* decompose_cmd = app.add_subcommand(
      "decompose", "Write the level-1 Haar subbands as PFM");
  decompose_cmd->add_option("-i,--input", decompose_in, "Input image")
      ->required();
  decompose_cmd->add_option("-o,--output", decompose_dir, "Output directory")
      ->required();

  std::string metric_a;
  std::string metric_b;
  std::string loe_ref;
  auto* metrics_cmd =
      app.add_subcommand("metrics", "Print id,psnr,ssim,loe as one CSV row");
  metrics_cmd->add_option("-a", metric_a, "Image under test")->required();
  metrics_cmd->add_option("-b", metric_b, "Reference image")->required();
  metrics_cmd->add_option("--loe-ref", loe_ref,
                          "Original low-light image for LOE against -a");

  std::string demo_out;
  std::string demo_trace;
  auto* demo_cmd = app.add_subcommand(
      "demo", "Enhance a gamma-darkened synthetic scene and report metrics");
  demo_cmd->add_option("-o,--output", demo_out, "Write the enhanced image");
  demo_cmd->add_option("--trace", demo_trace, "Per-step trace CSV");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  auto optional_path = [](const std::string& s) -> std::optional<fs::path> {
    if (s.empty()) return std::nullopt;
    return fs::path(s);
  };

  try {
    if (enhance_cmd->parsed()) {
      run_enhance(input, output, config, optional_path(trace));
    } else if (decompose_cmd->parsed()) {
      run_decompose(decompose_in, decompose_dir);
    } else if (metrics_cmd->parsed()) {
      run_metrics(metric_a, metric_b, optional_path(loe_ref), out);
    } else if (demo_cmd->parsed()) {
      run_demo_command(optional_path(demo_out), optional_path(demo_trace),
                       out);
    }
  } catch (const UsageError& e) {
    err << "wfp: " << e.what() << '\n';
    return 2;
  } catch (const IoError& e) {
    err << "wfp: " << e.what() << '\n';
    return 2;
  } catch (const FormatError& e) {
    err << "wfp: " << e.what() << '\n';
    return 2;
  } catch (const fs::filesystem_error& e) {
    err << "wfp: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "wfp: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace wfp
