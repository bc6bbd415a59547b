#include <iostream>

#include "pixflow/cli.hpp"

int main(int argc, char** argv) {
  const auto parsed = pixflow::cli::parse_args(argc, argv);
  if (!parsed.config) {
    (parsed.exit_code == 0 ? std::cout : std::cerr) << parsed.message << '\n';
    return parsed.exit_code;
  }
  return pixflow::cli::run_extract(*parsed.config, std::cerr);
}
