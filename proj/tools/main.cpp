#include "cli.hpp"

int main(int argc, char** argv) { return maxmargin::cli::run(argc, argv); }
