#include <iostream>
#include <string>
#include <vector>

#include "delsarte/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return delsarte::cli::dispatch(args, std::cout, std::cerr);
}
