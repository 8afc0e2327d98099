#ifndef LOOPBV_CLI_HPP
#define LOOPBV_CLI_HPP

#include "loopbv/cpn.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace loopbv {

// Built-in instances: "cpn:<n>:<coeff>", "cpn-rational:<n>", "s2",
// "hochschild:<n>".
StringBVInstance resolve_instance(const std::string &name, const DegreeWindow &w);

// exit codes: 0 = all checks pass, 1 = mathematical failure, 2 = usage error
int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

} // namespace loopbv

#endif
