#include <vector>

#include "evacsched/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return evacsched::run_cli(args);
}
