#include "cli.hpp"

int main(int argc, char** argv) { return climkt::cli::run_cli(argc, argv); }
