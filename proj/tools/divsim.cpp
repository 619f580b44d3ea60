#include "divsim/cli.hpp"

int main(int argc, char** argv) { return divsim::cli::run_main(argc, argv); }
