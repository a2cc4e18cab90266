#include <iostream>
#include <string>
#include <vector>

#include "tcrrgu/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return tcrrgu::cli::run(args, std::cout, std::cerr);
}
