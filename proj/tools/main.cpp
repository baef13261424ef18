#include "roam/cli.hpp"

int main(int argc, char** argv) { return roam::run_cli(argc, argv); }
