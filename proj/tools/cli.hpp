#ifndef JUSAT_CLI_HPP_
#define JUSAT_CLI_HPP_

#include <ostream>
#include <string>
#include <vector>

namespace jusat {

// Exit codes: 0 satisfiable, derivable or agreeing; 1 unsatisfiable,
// underivable or disagreeing; 2 a resource limit was hit; 3 usage or input
// error. `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace jusat

#endif  // JUSAT_CLI_HPP_
