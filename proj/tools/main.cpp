// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The wfp Authors

#include <iostream>
#include <string>
#include <vector>

#include "wfp/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return wfp::run_cli(args, std::cout, std::cerr);
}
