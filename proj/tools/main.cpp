#include "cli.hpp"

int main(int argc, char** argv) { return qrs::cli::main_entry(argc, argv); }
