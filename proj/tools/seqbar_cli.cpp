#include "seqbar/cli.hpp"

int main(int argc, char** argv) { return seqbar::run_cli(argc, argv); }
