#include "svdup/cli.hpp"

int main(int argc, char** argv) { return svdup::cli_main(argc, argv); }
