#include "fkp/cli.hpp"

int main(int argc, char** argv) { return fkp::cli::run(argc, argv); }
