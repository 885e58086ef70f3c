#include <iostream>
#include <string>
#include <vector>

#include "sws/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return sws::cli::run(args, std::cin, std::cout, std::cerr);
}
