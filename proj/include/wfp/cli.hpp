// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The wfp Authors

#pragma once

#include <filesystem>
#include <memory>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "wfp/error.hpp"
#include "wfp/pipeline.hpp"

namespace wfp {

/// Bad command line, configuration document or environment override.
class UsageError : public Error {
 public:
  using Error::Error;
};

struct PredictorSpec {
  enum class Kind { gaussian, conv };
  Kind kind = Kind::gaussian;
  double m = 0.5;
  double s = 0.25;
  std::filesystem::path weights_path;
};

enum class ScorerKind { none, mock };

struct CliConfig {
  EnhanceConfig enhance;
  PredictorSpec predictor;
  ScorerKind scorer = ScorerKind::none;
};

/// Strict parse: unknown keys, wrong types and out-of-range values all
/// raise UsageError. Every key is optional and falls back to the
/// EnhanceConfig defaults.
CliConfig parse_cli_config(const nlohmann::json& doc);
CliConfig load_cli_config(const std::filesystem::path& path);

std::unique_ptr<NoisePredictor> make_predictor(const PredictorSpec& spec);

/// Entry point. args excludes the program name. Returns 0 on success, 1 on
/// a processing error and 2 on a usage or file error. WFP_SEED, when set,
/// overrides the configured seed.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace wfp
