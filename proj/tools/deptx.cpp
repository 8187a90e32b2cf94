#include <iostream>

#include "deptx/cli.hpp"

int main(int argc, char** argv) {
  std::ios::sync_with_stdio(false);
  return deptx::cli::run(argc, argv, std::cout, std::cerr);
}
