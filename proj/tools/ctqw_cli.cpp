#include <iostream>
#include <string>
#include <vector>

#include "ctqw/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return ctqw::cli::run(args, std::cout, std::cerr);
}
