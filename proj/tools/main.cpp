#include <iostream>

#include "rsieve/cli.hpp"

int main(int argc, char** argv) { return rsieve::run(argc, argv, std::cout, std::cerr); }
