// tools/main.cpp

#include "qpl/cli.hpp"

int main(int argc, char** argv) { return qpl::cli::run(argc, argv); }
