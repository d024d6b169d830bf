#include <iostream>

#include "clothgrasp/cli.hpp"

int main(int argc, char** argv) { return clothgrasp::RunCli(argc, argv, std::cout, std::cerr); }
