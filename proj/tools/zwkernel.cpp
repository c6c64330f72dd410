#include "zw/cli.hpp"

int main(int argc, char** argv) { return zw::cli::run(argc, argv); }
