#pragma once

// Experiment runner behind the `oulab` executable.
//
//   oulab [--seed N] [--config FILE] [--out PATH] [--format csv|human]
//         [--rel-tol X] [--abs-tol X] <verify|diverge|scalar-bound|witness|p2-contrast|plot> ...
//
// Exit codes: 0 ok, 1 a check failed, 2 usage or configuration error.

#include <iosfwd>
#include <string>
#include <vector>

namespace oulab::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitUsage = 2;

/// Runs one command; `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Reads `key = value` lines ('#' starts a comment) and returns them as
/// `--key=value` tokens in file order.
std::vector<std::string> config_tokens(const std::string& path);

/// "diverge", "scalar", "witness", "p2" or "" for an unknown header line.
std::string detect_schema(const std::string& header_line);

/// A self-contained matplotlib script for a CSV produced by this tool.
std::string plot_script(const std::string& csv_text);

std::string format_number(double v);
std::vector<double> parse_double_list(const std::string& text);
std::vector<int> parse_int_list(const std::string& text);

}  // namespace oulab::cli
