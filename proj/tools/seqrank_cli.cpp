#include "seqrank/cli.hpp"

int main(int argc, char** argv) { return seqrank::cli_main(argc, argv); }
