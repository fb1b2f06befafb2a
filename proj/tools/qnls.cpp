#include "qnls/cli.hpp"

int main(int argc, char** argv) { return qnls::run_command(argc, argv); }
