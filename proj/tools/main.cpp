#include "cli.hpp"

int main(int argc, char** argv) { return quiverloop::cli::run(argc, argv); }
