#include <iostream>

#include "unimodal/cli.hpp"

int main(int argc, char** argv) { return unimodal::run_cli(argc, argv, std::cout, std::cerr); }
