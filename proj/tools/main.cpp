// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 RoK Contributors

#include <iostream>
#include <string>
#include <vector>

#include "rok/cli.hpp"

int main(int argc, char **argv) {
  return rok::run_cli(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
