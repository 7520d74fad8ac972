#include <iostream>

#include "minl_cli/app.hpp"

int main(int argc, char** argv) { return minl::cli::run(argc, argv, std::cout, std::cerr); }
