#pragma once

#include <iosfwd>

namespace isofield::cli {

// Exit codes: 0 success, 1 validation error, 2 numerical-check failure.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace isofield::cli
