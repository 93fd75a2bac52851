#include "cli/commands.hpp"

int main(int argc, char** argv) { return cluster_sense::cli::main(argc, argv); }
