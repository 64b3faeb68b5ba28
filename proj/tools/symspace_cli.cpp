#include <symspace/cli.hpp>

#include <iostream>

int main(int argc, char** argv) { return symspace::cli::main(argc, argv, std::cout, std::cerr); }
