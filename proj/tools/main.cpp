#include <iostream>

#include "fluxtrace/cli.hpp"

int main(int argc, char** argv) { return fluxtrace::cli::run(argc, argv, std::cout, std::cerr); }
