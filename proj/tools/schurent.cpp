#include "schurent/cli.hpp"

int main(int argc, char** argv) { return schurent::cli_main(argc, argv); }
