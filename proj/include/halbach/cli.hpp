#pragma once

#include <iosfwd>

namespace halbach {

// Exit status: 0 success, 1 physics-check failure, 2 usage or config error.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace halbach
