// SPDX-License-Identifier: Apache-2.0

#include <iostream>

#include "pfem/cli.hpp"

int main(int argc, char **argv)
{
  return pfem::run_cli(argc, argv, std::cout, std::cerr);
}
