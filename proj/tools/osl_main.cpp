#include "osl/cli.hpp"

int main(int argc, char** argv) { return osl::cli_main(argc, argv); }
