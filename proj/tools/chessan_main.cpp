#include "chessan/cli/dispatch.hpp"

#include <iostream>

int main(int argc, char** argv) { return chessan::cli::dispatch(argc, argv, std::cout, std::cerr); }
