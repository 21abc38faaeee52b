#include <iostream>
#include <string>
#include <vector>

#include "cnngp_cli/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return cnngp::cli::run(args, std::cout, std::cerr);
}
