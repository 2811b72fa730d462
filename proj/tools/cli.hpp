#ifndef CIEL_TOOLS_CLI_HPP
#define CIEL_TOOLS_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace ciel::cli {

// Exit statuses: 0 success, 1 logical negative (check false, UNSAT, INVALID,
// rejected proof, failed inference), 2 usage or parse error, 3 resource cap.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace ciel::cli

#endif  // CIEL_TOOLS_CLI_HPP
