#include <iostream>

#include "cli/app.hpp"

int main(int argc, char** argv) { return isofield::cli::run(argc, argv, std::cout, std::cerr); }
