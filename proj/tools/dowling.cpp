#include <iostream>

#include "dowling/cli.hpp"

int main(int argc, char** argv) { return dowling::cli::run_cli(argc, argv, std::cout, std::cerr); }
