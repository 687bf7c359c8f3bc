#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace pathopt
{

/*! \brief Command-line entry point.
 *
 * Exit status: 0 success, 1 usage or input error, 2 infeasible constraint,
 * 3 solver non-convergence. Data goes to `out`, diagnostics to `err`.
 */
int run( int argc, const char* const* argv, std::ostream& out, std::ostream& err );

/// Convenience overload; `args` excludes the program name.
int run( const std::vector<std::string>& args, std::ostream& out, std::ostream& err );

} // namespace pathopt
