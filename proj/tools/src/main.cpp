#include <iostream>

#include "ferrotorque/cli/commands.hpp"

int main(int argc, char** argv) { return ferrotorque::cli::run(argc, argv, std::cout, std::cerr); }
