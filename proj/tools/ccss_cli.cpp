// SPDX-License-Identifier: Apache-2.0
#include <iostream>
#include <vector>

#include "ccss/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return ccss::cli::run(args, std::cout, std::cerr);
}
