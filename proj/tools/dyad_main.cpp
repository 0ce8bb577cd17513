#include "dyad/experiments.hpp"

int main(int argc, char** argv) { return dyad::run_cli(argc, argv); }
