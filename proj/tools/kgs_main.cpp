#include "kgs/cli.hpp"

int main(int argc, char** argv) { return kgs::cli::main_entry(argc, argv); }
