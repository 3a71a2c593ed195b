#include <iostream>

#include "vdlab/cli.hpp"

int main(int argc, char** argv) {
  vdlab::cli::RunConfig config;
  if (const auto status = vdlab::cli::parse_command_line(argc, argv, config, std::cerr)) return *status;
  return vdlab::cli::run(config, std::cout, std::cerr);
}
