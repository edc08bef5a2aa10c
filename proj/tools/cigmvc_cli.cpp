#include "cigmvc/cli.hpp"

int main(int argc, char** argv) { return cigmvc::cli::main(argc, argv); }
