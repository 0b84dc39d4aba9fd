#include "otf/cli.hpp"

#include <iostream>

int
main(int argc, char** argv)
{
  return otf::cli::run_main({argv + 1, argv + argc}, std::cout, std::cerr);
}
