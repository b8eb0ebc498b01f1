#include "ueig/cli.hpp"

int main(int argc, char** argv) { return ueig::main_entry(argc, argv); }
