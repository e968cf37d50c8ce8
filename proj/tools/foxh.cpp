#include <iostream>
#include <string>
#include <vector>

#include "foxh/cli.hpp"

int main(int argc, char** argv) {
  return foxh::run_cli(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
