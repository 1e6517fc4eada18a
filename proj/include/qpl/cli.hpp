// cli.hpp
// Command-line front end. Exit codes: 0 success, 1 validation error or bad
// usage, 2 resource or runtime failure.

#pragma once

#include <iosfwd>

namespace qpl::cli {

int run(int argc, char** argv);

// Same as run() with explicit streams, for tests.
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace qpl::cli
