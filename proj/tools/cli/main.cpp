#include "cli/cli.hpp"

int main(int argc, char** argv) { return radseq::cli::run_main(argc, argv); }
