#include "s2s/cli.hpp"

int main(int argc, char** argv) { return s2s::cli_main(argc, argv); }
