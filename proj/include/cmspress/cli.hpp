#pragma once

#include <iosfwd>

namespace cmspress::cli {

/// Runs the command line. Returns 0 on success, 2 on validation errors and
/// 3 when a numeric method does not converge.
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace cmspress::cli
