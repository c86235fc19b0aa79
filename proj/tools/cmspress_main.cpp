#include <iostream>

#include "cmspress/cli.hpp"

int main(int argc, char** argv) { return cmspress::cli::run(argc, argv, std::cout, std::cerr); }
