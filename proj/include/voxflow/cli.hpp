#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace voxflow::cli {

/// Runs the voxflow command line. Payload goes to out, diagnostics to err.
/// Returns the process exit code: 0 ok, 1 usage, 2 I/O, 3 schema, 4 shape, 5 infeasible.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Same as above; args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace voxflow::cli
