#include <iostream>
#include <string>
#include <vector>

#include "fracdpg_cli/cli.hpp"

int main(int argc, char** argv) {
  return fracdpg::cli::main_entry(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
