#include "sigforge/cli.hpp"

int main(int argc, char** argv) { return sigforge::cli::run_cli(argc, argv); }
