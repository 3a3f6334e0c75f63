#include "fracode/cli.hpp"

int main(int argc, char** argv) { return fracode::run_cli(argc, argv); }
