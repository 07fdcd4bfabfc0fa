#include <iostream>

#include "nlse/commands.hpp"

int main(int argc, char** argv) { return nlse::cli::run(argc, argv, std::cout, std::cerr); }
