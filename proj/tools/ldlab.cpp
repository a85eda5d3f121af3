#include "ldlab/cli.hpp"

int main(int argc, char** argv) { return ldlab::cli::main(argc, argv); }
