#include "spencer/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return spencer::cli::run(args, std::cout, std::cerr);
}
