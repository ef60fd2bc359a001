#include "surgecast/cli.hpp"

int main(int argc, char** argv) { return surgecast::run_cli(argc, argv); }
