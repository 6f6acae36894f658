#pragma once

#include <ostream>

namespace subdiv::cli {

/// Entry point of the `subdiv` tool. Exit codes: 0 success, 2 bad arguments
/// or input, 3 analysis did not certify its result.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace subdiv::cli
