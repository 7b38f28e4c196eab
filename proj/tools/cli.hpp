#ifndef BLT_TOOLS_CLI_HPP_
#define BLT_TOOLS_CLI_HPP_

#include <iosfwd>

namespace blt::cli {

// Exit codes shared by every command.
inline constexpr int kOk = 0;
inline constexpr int kParseError = 1;     // bad flags, unreadable or malformed input
inline constexpr int kInvalidParams = 2;  // input fails validation
inline constexpr int kNumericFailure = 3;  // inversion failed or checks out of tolerance

// Runs one command. `in` backs "--input -"; the payload goes to `out` and
// diagnostics to `err`.
int run(int argc, const char* const* argv, std::istream& in, std::ostream& out,
        std::ostream& err);

}  // namespace blt::cli

#endif  // BLT_TOOLS_CLI_HPP_
