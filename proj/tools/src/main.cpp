#include <iostream>
#include <string>
#include <vector>

#include "cpd/cli.hpp"

int main(int argc, char** argv) {
  return cpd::cli::run(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
