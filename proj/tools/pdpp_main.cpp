#include <string>
#include <vector>

#include "pdpp/cli.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv + 1, argv + argc);
  return pdpp::run_cli(args);
}
