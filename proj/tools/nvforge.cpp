#include "nvforge/cli.hpp"

int main(int argc, char** argv) { return nvforge::run_cli(argc, argv); }
