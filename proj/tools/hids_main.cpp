#include <iostream>

#include "hids/harness/cli.hpp"

int main(int argc, char** argv) { return hids::harness::run_cli(argc, argv, std::cout, std::cerr); }
