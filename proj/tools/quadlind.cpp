#include "quadlind/cli.hpp"

int main(int argc, char** argv) { return quadlind::cli::run(argc, argv); }
