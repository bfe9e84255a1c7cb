#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace quadinfo::cli {

// Entry point of the `quadinfo` tool. `args` excludes the program name;
// `in` backs the `-` input path. Returns the process exit code.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace quadinfo::cli
