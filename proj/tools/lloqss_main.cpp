#include "lloqss/cli.hpp"

int main(int argc, char** argv) { return lloqss::cli_main(argc, argv); }
