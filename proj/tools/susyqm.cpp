#include <string>
#include <vector>

#include "susyqm/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return susyqm::cli::run(args);
}
