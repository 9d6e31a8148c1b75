#include "gtshap/harness.hpp"

int main(int argc, char** argv) { return gtshap::run_cli(argc, argv); }
