#include "harkit/cli.hpp"

int main(int argc, char** argv) { return harkit::cli::run(argc, argv); }
