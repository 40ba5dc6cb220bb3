#include "vine/cli.hpp"

int main(int argc, char** argv) { return vine::cli::run(argc, argv); }
