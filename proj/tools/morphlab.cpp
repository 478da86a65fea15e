// morphlab -- run the perception/production transfer experiment battery.

#include <iostream>

#include "morphlab/cli.hpp"

int main(int argc, char** argv) {
  return morphlab::run_cli(argc, argv, std::cout, std::cerr);
}
