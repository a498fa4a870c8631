#ifndef DYNBT_TOOLS_CLI_HPP
#define DYNBT_TOOLS_CLI_HPP

namespace dynbt::cli {

// Entry point of the command-line tool. Exit codes: 0 success, 1 usage error,
// 2 data/model error (structured JSON on stderr).
int run(int argc, const char* const* argv);

}  // namespace dynbt::cli

#endif  // DYNBT_TOOLS_CLI_HPP
