#include "raid/cli.hpp"

int main(int argc, char** argv) { return raid::cli::run(argc, argv); }
