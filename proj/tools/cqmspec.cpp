#include "cqm/cli.hpp"

int main(int argc, char** argv) { return cqm::cli::main_entry(argc, argv); }
