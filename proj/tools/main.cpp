#include "hplab/cli.hpp"

int main(int argc, char** argv) { return hplab::cli::main(argc, argv); }
