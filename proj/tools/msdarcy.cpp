#include "msdarcy/cli.hpp"

int main(int argc, char** argv) { return msdarcy::cli::main(argc, argv); }
