#include "cli.hpp"

int main(int argc, char** argv) {
  return gpam::cli::run(std::vector<std::string>(argv + 1, argv + argc));
}
