#include "cli.hpp"

int main(int argc, char** argv) { return gridcell::cli::run(argc, argv); }
