#ifndef TBV_CLI_HPP
#define TBV_CLI_HPP

#include <ostream>
#include <string>
#include <vector>

namespace tbv::cli {

/// Runs one command (args exclude the program name). Returns the process
/// exit code: 0 success, 1 negative domain verdict, 2 input or usage error.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace tbv::cli

#endif  // TBV_CLI_HPP
