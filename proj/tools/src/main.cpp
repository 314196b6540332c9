#include <iostream>

#include "sgmproxy/cli/app.hpp"

int main(int argc, char** argv) {
  return sgmproxy::cli::run_cli(argc, argv, std::cout, std::cerr);
}
