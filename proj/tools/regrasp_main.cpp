#include "treg/io.hpp"

int main(int argc, char** argv) { return treg::cli_main(argc, argv); }
