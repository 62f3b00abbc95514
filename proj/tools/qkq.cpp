#include <iostream>

#include "qkq/cli.hpp"

int main(int argc, char** argv) { return qkq::cli::run(argc, argv, std::cout, std::cerr); }
