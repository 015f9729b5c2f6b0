#include "lqcd/cli.hpp"

int main(int argc, char** argv) { return lqcd::cli::run(argc, argv); }
