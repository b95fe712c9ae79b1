#pragma once

#include <iosfwd>

namespace pxlab {

/// Entry point of the command-line tool. Returns the process exit code:
/// 0 success, 1 configuration or runtime error, 2 a scientific check failed.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace pxlab
