#include <iostream>

#include "spinvault/cli/app.hpp"

int main(int argc, char** argv) {
  return spinvault::cli::run(argc, argv, std::cout, std::cerr);
}
