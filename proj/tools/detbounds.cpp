#include "detbounds/cli.hpp"

int main(int argc, char** argv) { return detbounds::cli::run(argc, argv); }
