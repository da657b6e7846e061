#include "wmkit_cli.hpp"

int main(int argc, char** argv) { return wmkit::cli::run(argc, argv); }
