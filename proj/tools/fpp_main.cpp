#include "fpp/cli.hpp"

int main(int argc, char** argv) { return fpp::cli::run(argc, argv); }
