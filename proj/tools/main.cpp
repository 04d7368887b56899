#include "cli.hpp"

int main(int argc, char** argv) { return pai::cli::run(argc, argv); }
