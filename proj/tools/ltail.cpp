#include "ltail/cli.hpp"

int main(int argc, char** argv) { return ltail::run_cli(argc, argv); }
