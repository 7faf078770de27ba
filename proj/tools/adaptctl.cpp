#include <iostream>

#include "adaptctl/commands.hpp"

int main(int argc, char** argv) { return adaptctl::cli::run(argc, argv, std::cout, std::cerr); }
