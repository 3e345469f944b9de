#include "qrd/cli.hpp"

int main(int argc, char** argv) { return qrd::run_cli(argc, argv); }
