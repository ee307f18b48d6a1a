#include "spdcsim/cli.hpp"

int main(int argc, char** argv) { return spdcsim::run_cli(argc, argv); }
