#include <iostream>

#include "loopm/cli.hpp"

int main(int argc, char** argv) { return loopm::main_with_args(argc, argv, std::cout, std::cerr); }
