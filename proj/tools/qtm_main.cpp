#include "qtm/cli.hpp"

int main(int argc, char** argv) { return qtm::run_cli(argc, argv); }
