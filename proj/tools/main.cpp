#include "cli.hpp"

int main(int argc, char** argv) { return degen::cli::run(argc, argv); }
