#include <iostream>

#include "dynphase/commands.hpp"

int main(int argc, char** argv) {
  return dynphase::cli::run(argc, argv, std::cout, std::cerr);
}
