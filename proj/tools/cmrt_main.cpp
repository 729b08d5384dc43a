#include "cmrt/cli.hpp"

int main(int argc, char** argv) { return cmrt::cli::run(argc, argv); }
