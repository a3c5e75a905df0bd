#include <iostream>

#include "serre/cli.hpp"

int main(int argc, char** argv) {
  return serre::cli::main_entry(argc, argv, std::cout, std::cerr);
}
