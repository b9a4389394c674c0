#include "psdcone/cli.hpp"

int main(int argc, char** argv) { return psdcone::cli::main(argc, argv); }
