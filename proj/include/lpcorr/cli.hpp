#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "lpcorr/arith.hpp"

namespace lpcorr::cli {

enum ExitCode : int {
    kOk = 0,
    kUsage = 1,
    kVerificationFailed = 2,
    kResourceLimit = 3,
};

/// Runs one invocation; `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Comma-separated decimal integers; "" is the empty list. Errors name the
/// offending token.
std::vector<Int> parse_int_list(std::string_view text, std::string_view flag);

/// A single integer, also accepting exact scientific forms such as "1e7".
Int parse_int(std::string_view text, std::string_view flag);

} // namespace lpcorr::cli
