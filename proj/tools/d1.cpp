#include "d1/cli.hpp"

int main(int argc, char** argv) { return d1::cli::run(argc, argv); }
