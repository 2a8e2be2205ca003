#include <iostream>

#include "seqguess/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return seqguess::runCli(args, std::cin, std::cout, std::cerr);
}
