#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace umse {

// Entry point of the `umse` command-line tool. `args` excludes the program
// name. CSV goes to `out`; failures print exactly one line
//   error: <kind>: <message>
// to `err`. Returns 0 iff every requested output was produced, 2 on usage
// errors and 1 on any other failure.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace umse
