#include <iostream>

#include "gmedian/cli.hpp"

int main(int argc, char** argv) {
  return gmedian::cli::run(argc, argv, std::cout, std::cerr);
}
