#include "gch/cli.hpp"

int main(int argc, char** argv) { return gch::cli::run(argc, argv); }
