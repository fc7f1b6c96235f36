#include "sgdnet/commands.hpp"

#include <iostream>

int main(int argc, char** argv) { return sgdnet::cli::run(argc, argv, std::cout, std::cerr); }
