#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

namespace robosync::cli {

// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;  // validation, parse, bind, trace or log errors
inline constexpr int kExitUsage = 2;    // bad arguments or unreadable/unwritable files

int cmd_validate(const std::string& config_path, std::ostream& out, std::ostream& err);

/// Prints the canonical formatting of the program, or its AST as JSON.
int cmd_parse(const std::string& program_path, bool dump_ast, std::ostream& out, std::ostream& err);

struct RunArgs {
    std::string config_path;
    std::string program_path;
    std::string trace_path;
    std::string out_path = "-";  // "-" is `out`
    bool stats = false;          // stats line goes to `err`
    std::optional<std::int64_t> until_us;
};

int cmd_run(const RunArgs& args, std::ostream& out, std::ostream& err);

int cmd_stats(const std::string& log_path, std::ostream& out, std::ostream& err);

/// Full command line: `validate`, `parse`, `run`, `stats`.
int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace robosync::cli
