#include "dipole/cli.hpp"

int main(int argc, char** argv) { return dipole::cli::run(argc, argv); }
