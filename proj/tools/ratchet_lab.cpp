#include <iostream>

#include "ratchet/cli.hpp"

int main(int argc, char** argv) { return ratchet::run_cli(argc, argv, std::cout, std::cerr); }
