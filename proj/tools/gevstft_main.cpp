#include "gev/cli.hpp"

int main(int argc, char** argv) { return gev::cli::run(argc, argv); }
