#include "cli.hpp"

int main(int argc, char** argv) { return tcap::cli::run(argc, argv); }
