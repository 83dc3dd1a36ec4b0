#include <iostream>

#include "powres/cli.hpp"

int main(int argc, char** argv) {
  return powres::cli::run(argc, argv, std::cout, std::cerr);
}
