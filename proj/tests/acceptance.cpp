// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The wfp Authors

// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iterator>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "oracles.hpp"
#include "wfp/demo.hpp"
#include "wfp/diffusion.hpp"
#include "wfp/fourier.hpp"
#include "wfp/guidance.hpp"
#include "wfp/image_io.hpp"
#include "wfp/metrics.hpp"
#include "wfp/pipeline.hpp"
#include "wfp/wavelet.hpp"

#ifndef WFP_CLI_PATH
#error "WFP_CLI_PATH must name the wfp executable"
#endif

using namespace wfp;
using testing::max_abs_diff;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

ImageBuffer constant(int h, int w, int c, double v) {
  return ImageBuffer(h, w, c, std::vector<double>(static_cast<std::size_t>(h) * w * c, v),
                     RangeTag::display);
}

// 1
Outcome transform_suite() {
  const auto start = Clock::now();
  std::mt19937_64 gen(1001);
  std::uniform_int_distribution<int> dim(2, 33);
  double pr = 0.0;
  double energy = 0.0;
  double fft_rt = 0.0;
  double polar_rt = 0.0;
  int odd = 0;
  for (int i = 0; i < 200; ++i) {
    const int h = dim(gen);
    const int w = dim(gen);
    const int c = i % 2 ? 3 : 1;
    ImageBuffer img = testing::random_image(gen, h, w, c, -1, 1);
    SubbandSet b = dwt2(img);
    pr = std::max(pr, max_abs_diff(idwt2(b), img));
    if (h % 2 == 0 && w % 2 == 0) {
      const double e = testing::energy(b.ll) + testing::energy(b.lh) +
                       testing::energy(b.hl) + testing::energy(b.hh);
      energy = std::max(energy, std::abs(e - testing::energy(img)) / testing::energy(img));
    } else {
      ++odd;
    }
    Spectrum s = fft2(img);
    fft_rt = std::max(fft_rt, max_abs_diff(ifft2_real(s), img));
    Spectrum back = recompose(amp_phase(s));
    for (std::size_t k = 0; k < s.bins.size(); ++k) {
      polar_rt = std::max(polar_rt, std::abs(back.bins[k] - s.bins[k]));
    }
  }
  double dft = 0.0;
  for (int h = 1; h <= 8; ++h) {
    for (int w = 1; w <= 8; ++w) {
      ImageBuffer img = testing::random_image(gen, h, w, 3, -1, 1);
      Spectrum s = fft2(img);
      for (int c = 0; c < 3; ++c) {
        auto ref = testing::direct_dft(img, c);
        for (int u = 0; u < h; ++u) {
          for (int v = 0; v < w; ++v) dft = std::max(dft, std::abs(s(c, u, v) - ref[u * w + v]));
        }
      }
    }
  }
  const double secs = seconds_since(start);
  const bool pass = pr < 1e-6 && energy < 1e-5 && fft_rt < 1e-6 && polar_rt < 1e-6 &&
                    dft < 1e-9 && secs < 10.0;
  return {pass, fmt::format("dwt rt {:.2e} ({} odd), energy {:.2e}, fft rt {:.2e}, polar rt "
                            "{:.2e}, dft {:.2e}, {:.2f}s",
                            pr, odd, energy, fft_rt, polar_rt, dft, secs)};
}

// 2
Outcome haar_oracle() {
  std::mt19937_64 gen(1002);
  double err = 0.0;
  for (int i = 0; i < 100; ++i) {
    ImageBuffer img = testing::random_image(gen, 6, 6, 1, -1, 1);
    SubbandSet b = dwt2(img);
    for (int by = 0; by < 3; ++by) {
      for (int bx = 0; bx < 3; ++bx) {
        auto c = testing::haar_block({img(0, 2 * by, 2 * bx), img(0, 2 * by, 2 * bx + 1),
                                      img(0, 2 * by + 1, 2 * bx), img(0, 2 * by + 1, 2 * bx + 1)});
        err = std::max({err, std::abs(b.ll(0, by, bx) - c[0]), std::abs(b.hl(0, by, bx) - c[1]),
                        std::abs(b.lh(0, by, bx) - c[2]), std::abs(b.hh(0, by, bx) - c[3])});
      }
    }
  }
  return {err <= 1e-12, fmt::format("max deviation {:.2e} over 900 blocks", err)};
}

// 3
Outcome sampler_algebra() {
  // 50-digit product of (1 - beta_t), betas linear in [1e-4, 0.02], T = 1000.
  constexpr double kOracle = 4.0358297653756833e-5;
  NoiseSchedule s = NoiseSchedule::linear(1000, 1e-4, 0.02);
  const double rel = std::abs(s.alpha_bar(1000) - kOracle) / kOracle;

  std::mt19937_64 gen(1003);
  Rng rng(3);
  bool guided_exact = true;
  double unguided = 0.0;
  for (int steps : {10, 100, 1000}) {
    NoiseSchedule sched = NoiseSchedule::scaled_linear(steps);
    for (int i = 0; i < 20; ++i) {
      ImageBuffer x0 = testing::random_image(gen, 5, 6, 3, -1, 1);
      ImageBuffer eps = rng.normal_image(5, 6, 3);
      ImageBuffer x1 = q_sample(x0, 1, eps, sched);
      ImageBuffer target = testing::random_image(gen, 5, 6, 3, -2, 2);
      guided_exact = guided_exact && guided_step(x1, target, 1, sched, rng) == target;
      unguided = std::max(unguided, max_abs_diff(unguided_step(x1, eps, 1, sched, rng), x0));
    }
  }
  const bool pass = guided_exact && unguided < 1e-6 && rel < 1e-3;
  return {pass, fmt::format("guided t=1 exact: {}, unguided t=1 {:.2e}, alpha_bar[1000] {:.10e} "
                            "(rel {:.1e})",
                            guided_exact ? "yes" : "no", unguided, s.alpha_bar(1000), rel)};
}

// 4
Outcome toy_distribution() {
  const auto start = Clock::now();
  const double m = 0.3;
  NoiseSchedule sched = NoiseSchedule::scaled_linear(100);
  GaussianPriorPredictor pred(m, 0.1);
  const int runs = 2000;
  std::vector<double> means;
  means.reserve(runs);
  for (int r = 0; r < runs; ++r) {
    Rng rng(derive_seed(4, fmt::format("run{}", r)));
    ImageBuffer x = rng.normal_image(8, 8, 1);
    for (int t = 100; t >= 1; --t) x = unguided_step(x, pred.predict(x, t, sched), t, sched, rng);
    means.push_back(mean(x));
  }
  double avg = 0.0;
  for (double v : means) avg += v;
  avg /= runs;
  double var = 0.0;
  for (double v : means) var += (v - avg) * (v - avg);
  var /= runs - 1;
  const double se = std::sqrt(var / runs);
  const double z = (avg - m) / se;
  const double secs = seconds_since(start);
  return {std::abs(z) < 4.0 && secs < 60.0,
          fmt::format("mean {:.6f}, SE {:.2e}, z {:+.2f}, {:.2f}s", avg, se, z, secs)};
}

// 5
Outcome theta_zero_collapse() {
  std::mt19937_64 gen(1005);
  double collapse = 0.0;
  for (int i = 0; i < 50; ++i) {
    ImageBuffer input = testing::random_image(gen, 8 + i % 9, 8 + i % 7, i % 2 ? 3 : 1, 0, 1,
                                              RangeTag::display);
    GuidancePriors p = build_priors(input);
    ImageBuffer x = testing::random_image(gen, p.ll_scaled.height(), p.ll_scaled.width(),
                                          input.channels(), -3, 3);
    collapse = std::max(collapse, max_abs_diff(guided_update(x, p, Theta{0.0}), p.ll_scaled));
  }
  GaussianPriorPredictor pred(0.5, 0.25);
  double pipeline = 0.0;
  for (int i = 0; i < 10; ++i) {
    ImageBuffer input = testing::random_image(gen, 16 + 3 * i, 20 + i, i % 2 ? 3 : 1, 0, 1,
                                              RangeTag::display);
    EnhanceConfig cfg;
    cfg.steps = 100;
    cfg.semantic_interval = 20;
    cfg.theta_init = 0.0;
    cfg.theta_lr = 0.0;
    cfg.denoise_strength = 0.0;
    cfg.seed = 50 + i;
    cfg.init_mode = i % 3 == 0 ? InitMode::pure_noise : InitMode::noised_input;
    EnhanceResult r = enhance(input, cfg, pred, nullptr);
    ImageBuffer expected = convert_range(convert_range(input, RangeTag::model), RangeTag::display);
    pipeline = std::max(pipeline, max_abs_diff(r.image, expected));
  }
  return {collapse < 1e-6 && pipeline < 1e-5,
          fmt::format("guided_update {:.2e} (50 samples), pipeline identity {:.2e} (10 images)",
                      collapse, pipeline)};
}

// 6
Outcome theta_affinity() {
  std::mt19937_64 gen(1006);
  double err = 0.0;
  for (int i = 0; i < 50; ++i) {
    ImageBuffer input = testing::random_image(gen, 8 + 2 * (i % 10), 12 + i % 5, i % 2 ? 3 : 1, 0,
                                              1, RangeTag::display);
    GuidancePriors p = build_priors(input);
    ImageBuffer x = testing::random_image(gen, p.ll_scaled.height(), p.ll_scaled.width(),
                                          input.channels(), -1, 1);
    ImageBuffer mid = affine(add(guided_update(x, p, Theta{0.0}), guided_update(x, p, Theta{1.0})),
                             0.5, 0.0);
    err = std::max(err, max_abs_diff(guided_update(x, p, Theta{0.5}), mid));
  }
  return {err < 1e-6, fmt::format("max deviation {:.2e} over 50 inputs", err)};
}

// 7
Outcome theta_gradient_check() {
  std::mt19937_64 gen(1007);
  std::uniform_real_distribution<double> th(0.0, 2.0);
  const double h = 1e-4;
  const double e = 0.6;
  int accepted = 0;
  int skipped = 0;
  double worst = 0.0;
  while (accepted < 50) {
    const int size = 16 + 8 * (accepted % 6);
    ImageBuffer input = testing::random_image(gen, size, size + 8, accepted % 2 ? 3 : 1, 0, 1,
                                              RangeTag::display);
    GuidancePriors p = build_priors(input);
    ImageBuffer x = testing::random_image(gen, p.ll_scaled.height(), p.ll_scaled.width(),
                                          input.channels(), -0.5, 1.0);
    const double theta = h + th(gen);
    ImageBuffer lo = guided_update(x, p, Theta{theta - h});
    ImageBuffer hi = guided_update(x, p, Theta{theta + h});
    ImageBuffer at = guided_update(x, p, Theta{theta});
    // Sign-kink cases: a tile mean near the target or crossing it inside the
    // stencil.
    bool kink = false;
    const ImageBuffer lum_lo = luminance(lo, LuminanceMode::channel_mean);
    const ImageBuffer lum_hi = luminance(hi, LuminanceMode::channel_mean);
    const ImageBuffer lum_at = luminance(at, LuminanceMode::channel_mean);
    for (int y0 = 0; y0 < lo.height(); y0 += kBrightnessTile) {
      for (int x0 = 0; x0 < lo.width(); x0 += kBrightnessTile) {
        double a = 0.0, b = 0.0, c = 0.0;
        int n = 0;
        for (int y = y0; y < std::min(y0 + kBrightnessTile, lo.height()); ++y) {
          for (int xx = x0; xx < std::min(x0 + kBrightnessTile, lo.width()); ++xx) {
            a += lum_lo(0, y, xx);
            b += lum_hi(0, y, xx);
            c += lum_at(0, y, xx);
            ++n;
          }
        }
        if ((a / n - e) * (b / n - e) <= 0.0 || std::abs(c / n - e) < 1e-6) kink = true;
      }
    }
    if (kink) {
      ++skipped;
      continue;
    }
    const double fd = (brightness_loss(hi, e) - brightness_loss(lo, e)) / (2 * h);
    const double analytic = theta_gradient(x, p, Theta{theta}, e);
    worst = std::max(worst, std::abs(analytic - fd) / std::max(std::abs(fd), 1e-12));
    ++accepted;
  }
  return {worst < 1e-4, fmt::format("max relative error {:.2e} over 50 instances ({} kink cases "
                                    "skipped)",
                                    worst, skipped)};
}

// 8
Outcome semantic_contract() {
  MockScorer scorer;
  PromptPair prompts;
  std::mt19937_64 gen(1008);
  bool symmetric = true;
  for (double c : {-1.0, -0.3, 0.0, 0.4, 1.0}) {
    symmetric = symmetric && semantic_loss_from_cosines(c, c) == 0.5;
  }
  for (int i = 0; i < 10; ++i) {
    ImageBuffer img = testing::random_image(gen, 12, 12, 3, 0, 1, RangeTag::display);
    symmetric = symmetric && semantic_loss(scorer, img, PromptPair{"same", "same"}) == 0.5;
  }
  const double at = semantic_loss_from_cosines(1.0, 0.0);
  const double err = std::abs(at - 1.0 / (1.0 + std::exp(1.0)));
  bool identity = true;
  for (int i = 0; i < 10; ++i) {
    ImageBuffer img = testing::random_image(gen, 9, 13, i % 2 ? 3 : 1, 0, 1, RangeTag::display);
    identity = identity && apply_semantic_guidance(img, scorer, prompts, 0.0, 0.05) == img;
  }
  return {symmetric && err <= 1e-9 && identity,
          fmt::format("symmetric 0.5: {}, loss(1,0) {:.9f} (err {:.1e}), weight-0 identity: {}",
                      symmetric ? "yes" : "no", at, err, identity ? "yes" : "no")};
}

// 9
Outcome brightness_contract() {
  double err = 0.0;
  err = std::max(err, brightness_loss(constant(32, 32, 3, 0.6), 0.6));
  ImageBuffer two(16, 32, 1, RangeTag::display);
  for (int y = 0; y < 16; ++y) {
    for (int x = 0; x < 32; ++x) two(0, y, x) = x < 16 ? 0.4 : 0.8;
  }
  err = std::max(err, std::abs(brightness_loss(two, 0.6) - 0.2));
  for (double v : {0.0, 0.25, 0.9}) {
    for (auto [h, w] : {std::pair{5, 7}, {16, 16}, {33, 47}}) {
      err = std::max(err, std::abs(brightness_loss(constant(h, w, 3, v), 0.6) - std::abs(v - 0.6)));
    }
  }
  std::mt19937_64 gen(1009);
  double perm = 0.0;
  for (int i = 0; i < 50; ++i) {
    const int h = 8 + (i * 7) % 50;
    const int w = 8 + (i * 11) % 50;
    ImageBuffer img = testing::random_image(gen, h, w, i % 2 ? 3 : 1, 0, 1, RangeTag::display);
    ImageBuffer shuffled = img;
    for (int y0 = 0; y0 < h; y0 += kBrightnessTile) {
      for (int x0 = 0; x0 < w; x0 += kBrightnessTile) {
        std::vector<std::pair<int, int>> px;
        for (int y = y0; y < std::min(y0 + kBrightnessTile, h); ++y) {
          for (int x = x0; x < std::min(x0 + kBrightnessTile, w); ++x) px.emplace_back(y, x);
        }
        auto order = px;
        std::shuffle(order.begin(), order.end(), gen);
        for (std::size_t k = 0; k < px.size(); ++k) {
          for (int c = 0; c < img.channels(); ++c) {
            shuffled(c, px[k].first, px[k].second) = img(c, order[k].first, order[k].second);
          }
        }
      }
    }
    perm = std::max(perm, std::abs(brightness_loss(shuffled, 0.6) - brightness_loss(img, 0.6)));
  }
  return {err <= 1e-12 && perm <= 1e-12,
          fmt::format("hand cases {:.2e}, permutation {:.2e} over 50 images", err, perm)};
}

// 10
Outcome demo_check() {
  const auto start = Clock::now();
  DemoSettings settings;
  DemoReport r = run_demo(settings);
  const double secs = seconds_since(start);
  const double e = settings.config.e_level;
  const bool pass = std::abs(r.mean_luminance - e) <= 0.05 && r.psnr_output > r.psnr_dark &&
                    r.loe_output <= r.loe_control && secs < 120.0;
  return {pass, fmt::format("mean luminance {:.4f} (target {:.2f}), PSNR {:.3f} -> {:.3f}, LOE "
                            "{:.1f} vs control {:.1f}, {:.2f}s",
                            r.mean_luminance, e, r.psnr_dark, r.psnr_output, r.loe_output,
                            r.loe_control, secs)};
}

// 11
Outcome metrics_contract() {
  std::mt19937_64 gen(1011);
  ImageBuffer x = testing::random_image(gen, 16, 16, 3, 0, 1, RangeTag::display);
  const bool psnr_ok = psnr(x, x) == 99.0 &&
                       std::abs(psnr(constant(8, 8, 1, 0.0), constant(8, 8, 1, 0.5)) - 6.0206) < 1e-4 &&
                       std::abs(psnr(constant(8, 8, 1, 0.0), constant(8, 8, 1, 0.1)) - 20.0) < 1e-9;
  const double flat = ssim(constant(12, 12, 1, 0.5), constant(12, 12, 1, 0.25));
  const double flat_ref = (2 * 0.125 + 1e-4) / (0.3125 + 1e-4);
  const bool ssim_ok = std::abs(ssim(x, x) - 1.0) < 1e-12 && std::abs(flat - flat_ref) < 1e-9;

  ImageBuffer row(1, 3, 1, {0.1, 0.5, 0.9}, RangeTag::display);
  ImageBuffer rev(1, 3, 1, {0.9, 0.5, 0.1}, RangeTag::display);
  bool loe_ok = loe(row, row) == 0.0 && std::abs(loe(row, rev) - 2.0) < 1e-12;
  for (int i = 0; i < 5; ++i) {
    ImageBuffer a = testing::random_image(gen, 40 + 10 * i, 70, 3, 0.01, 1, RangeTag::display);
    ImageBuffer g = a;
    for (double& v : g.samples()) v = std::pow(v, 0.5 + 0.3 * i);
    loe_ok = loe_ok && loe(a, g) == 0.0;
  }

  double brute = 0.0;
  for (int i = 0; i < 20; ++i) {
    ImageBuffer a = testing::random_image(gen, 16, 16, i % 2 ? 3 : 1, 0, 1, RangeTag::display);
    ImageBuffer b = testing::random_image(gen, 16, 16, a.channels(), 0, 1, RangeTag::display);
    brute = std::max(brute, std::abs(ssim(a, b) - testing::brute_force_ssim(a, b)));
  }
  return {psnr_ok && ssim_ok && loe_ok && brute < 1e-9,
          fmt::format("psnr: {}, ssim: {} (flat pair {:.6f}), loe: {}, ssim vs brute force {:.2e}",
                      psnr_ok ? "ok" : "bad", ssim_ok ? "ok" : "bad", flat,
                      loe_ok ? "ok" : "bad", brute)};
}

// 12
std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::string quoted(const fs::path& p) { return "'" + p.string() + "'"; }

Outcome cli_determinism() {
  const fs::path root = testing::scratch_dir("acceptance_cli");
  fs::create_directories(root / "in");
  std::mt19937_64 gen(1012);
  save_image(testing::random_image(gen, 24, 32, 3, 0, 0.3, RangeTag::display), root / "in" / "a.png");
  save_image(testing::random_image(gen, 20, 20, 1, 0, 0.3, RangeTag::display), root / "in" / "b.png");
  std::ofstream(root / "cfg.json")
      << R"({"T": 40, "S": 10, "guidance_weight": 0.05, "scorer": {"type": "mock"},
             "denoise_strength": 0.05})";

  const std::string cli = quoted(WFP_CLI_PATH);
  auto run_all = [&](const std::string& seed, const fs::path& out) {
    fs::create_directories(out);
    const std::string env = "WFP_SEED=" + seed + " ";
    const std::vector<std::string> commands = {
        env + cli + " enhance -i " + quoted(root / "in" / "a.png") + " -o " +
            quoted(out / "single.png") + " -c " + quoted(root / "cfg.json") + " --trace " +
            quoted(out / "single.csv"),
        env + cli + " enhance -i " + quoted(root / "in") + " -o " + quoted(out / "batch") +
            " -c " + quoted(root / "cfg.json"),
        env + cli + " decompose -i " + quoted(root / "in" / "a.png") + " -o " +
            quoted(out / "bands"),
        env + cli + " metrics -a " + quoted(out / "single.png") + " -b " +
            quoted(root / "in" / "a.png") + " --loe-ref " + quoted(root / "in" / "a.png") +
            " > " + quoted(out / "metrics.csv"),
        env + cli + " demo -o " + quoted(out / "demo.png") + " --trace " +
            quoted(out / "demo.csv") + " > " + quoted(out / "demo.txt"),
    };
    for (const std::string& cmd : commands) {
      if (std::system(cmd.c_str()) != 0) return false;
    }
    return true;
  };
  if (!run_all("7", root / "r1") || !run_all("7", root / "r2") || !run_all("8", root / "r3")) {
    return {false, "a CLI invocation exited with an error"};
  }
  int files = 0;
  int mismatched = 0;
  int seed_sensitive = 0;
  for (const auto& entry : fs::recursive_directory_iterator(root / "r1")) {
    if (!entry.is_regular_file()) continue;
    const fs::path rel = fs::relative(entry.path(), root / "r1");
    ++files;
    const std::string first = slurp(entry.path());
    if (first != slurp(root / "r2" / rel)) ++mismatched;
    if (first != slurp(root / "r3" / rel)) ++seed_sensitive;
  }
  return {files > 0 && mismatched == 0,
          fmt::format("{} output files, {} differ between repeated runs ({} change under another "
                      "seed)",
                      files, mismatched, seed_sensitive)};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"transform suite", transform_suite},
      {"haar matrix oracle", haar_oracle},
      {"sampler algebra", sampler_algebra},
      {"toy distribution", toy_distribution},
      {"theta zero collapse", theta_zero_collapse},
      {"affinity in theta", theta_affinity},
      {"theta gradient", theta_gradient_check},
      {"semantic loss contract", semantic_contract},
      {"brightness loss", brightness_contract},
      {"end-to-end demo", demo_check},
      {"metrics", metrics_contract},
      {"cli determinism", cli_determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::printf("%s  %2zu %-24s %s\n", o.pass ? "PASS" : "FAIL", i + 1,
                criteria[i].first.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
