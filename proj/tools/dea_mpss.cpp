#include "mpss/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return mpss::cli::run(argc, argv, std::cout, std::cerr); }
