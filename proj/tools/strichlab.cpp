#include "strichlab/cli.hpp"

int main(int argc, char** argv) { return strichlab::cli::run(argc, argv); }
