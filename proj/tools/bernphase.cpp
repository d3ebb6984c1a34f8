#include "bernphase/cli.hpp"

int main(int argc, char** argv) { return bernphase::cli::run(argc, argv); }
