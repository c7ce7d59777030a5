#include <iostream>

#include "photon_ur/cli.hpp"

int main(int argc, char **argv) {
  return photon_ur::run_command_line(argc, argv, std::cout, std::cerr);
}
