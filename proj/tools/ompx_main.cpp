#include "ompx/bench.hpp"

int main(int argc, char** argv) { return ompx::bench::cli_main(argc, argv); }
