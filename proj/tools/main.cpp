#include <iostream>

#include "alife/cli.hpp"

int main(int argc, char** argv) { return alife::cli::run(argc, argv, std::cout, std::cerr); }
