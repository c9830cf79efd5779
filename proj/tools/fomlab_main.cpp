#include <iostream>
#include <string>
#include <vector>

#include "fomlab/cli.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv + 1, argv + argc);
  return fomlab::execute(args, std::cout, std::cerr);
}
