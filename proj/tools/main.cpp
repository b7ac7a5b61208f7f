#include <vector>

#include "cewe/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return cewe::cli::run(args);
}
