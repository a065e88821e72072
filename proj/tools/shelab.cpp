#include "shelab/cli.hpp"

int main(int argc, char** argv) { return shelab::cli_main(argc, argv); }
