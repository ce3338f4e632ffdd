#include "dilemma/commands.hpp"

int main(int argc, char** argv) { return dilemma::run_cli(argc, argv); }
