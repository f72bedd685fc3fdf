#include "coeffid_cli.hpp"

int main(int argc, char** argv) {
  return coeffid::cli::run(std::vector<std::string>(argv + 1, argv + argc));
}
