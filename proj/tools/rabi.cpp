// rabi.cpp - command-line front end

#include <iostream>

#include "cli.hpp"

int main(int argc, char** argv) { return rabi::cli::run(argc, argv, std::cout, std::cerr); }
