#include "irs/cli.hpp"

int main(int argc, char** argv) { return irs::cli::run(argc, argv); }
