#include <iostream>

#include "hrsift/cli.hpp"

int main(int argc, char** argv) { return hrsift::cli::dispatch(argc, argv, std::cout, std::cerr); }
