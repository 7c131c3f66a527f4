#include <iostream>

#include "rcount/cli.hpp"

int main(int argc, char** argv) {
  return rcount::run_cli(argc, argv, std::cout, std::cerr);
}
