#include "cubeinf/cli.hpp"

int main(int argc, char** argv) { return cubeinf::cli::run_main(argc, argv); }
