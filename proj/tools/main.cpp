#include "dlrc/cli.hpp"

int main(int argc, char** argv) { return dlrc::cli::run(argc, argv); }
