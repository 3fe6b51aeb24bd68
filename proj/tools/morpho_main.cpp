#include <iostream>
#include <string>
#include <vector>

#include <morpho/cli.hpp>

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return morpho::cli::run(args, std::cout, std::cerr);
}
