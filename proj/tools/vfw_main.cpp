#include "vfw/cli.hpp"

int main(int argc, char** argv) { return vfw::cli_main(argc, argv); }
