#include <iostream>

#include "inflectus/cli.hpp"

int main(int argc, char** argv) { return inflectus::runCli(argc, argv, std::cout, std::cerr); }
