#include "stlfem/scenario.hpp"

int main(int argc, char** argv) { return stlfem::run_cli(argc, argv); }
