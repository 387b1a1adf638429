// SPDX-License-Identifier: Apache-2.0
#include <iostream>

#include "defcast/cli.hpp"

int main(int argc, char** argv) { return defcast::cli::run(argc, argv, std::cout, std::cerr); }
