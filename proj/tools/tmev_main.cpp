#include "tmev/cli.hpp"

int main(int argc, char** argv) { return tmev::cli::run(argc, argv); }
