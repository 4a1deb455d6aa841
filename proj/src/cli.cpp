#include "robosync/cli.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "robosync/config.hpp"
#include "robosync/dsl/bind.hpp"
#include "robosync/dsl/format.hpp"
#include "robosync/dsl/parser.hpp"
#include "robosync/engine/engine.hpp"
#include "robosync/engine/stats.hpp"

namespace robosync::cli {

namespace {

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot read '" + path + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// Config failures as one line per issue, field path first.
void report_config_error(const config::ConfigError& e, std::ostream& os)
{
    if (const auto* schema = dynamic_cast<const config::SchemaError*>(&e)) {
        for (const auto& issue : schema->issues()) {
            os << issue.to_string() << '\n';
        }
    } else {
        os << e.what() << '\n';
    }
}

} // namespace

int cmd_validate(const std::string& config_path, std::ostream& out, std::ostream& err)
{
    try {
        config::parse_config(read_file(config_path));
        out << "OK\n";
        return kExitOk;
    } catch (const IoError& e) {
        err << e.what() << '\n';
        return kExitUsage;
    } catch (const config::ConfigError& e) {
        report_config_error(e, out);
        return kExitFailure;
    }
}

int cmd_parse(const std::string& program_path, bool dump_ast, std::ostream& out, std::ostream& err)
{
    try {
        auto program = dsl::parse_program(read_file(program_path));
        out << (dump_ast ? dsl::dump_ast(program) + "\n" : dsl::format_program(program));
        return kExitOk;
    } catch (const IoError& e) {
        err << e.what() << '\n';
        return kExitUsage;
    } catch (const dsl::ParseError& e) {
        err << program_path << ":" << e.what() << '\n';
        return kExitFailure;
    }
}

int cmd_run(const RunArgs& args, std::ostream& out, std::ostream& err)
{
    std::string log_text;
    std::string stats_line;
    try {
        auto config_text = read_file(args.config_path);
        auto program_text = read_file(args.program_path);
        auto trace_text = read_file(args.trace_path);

        auto config = config::parse_config(config_text);
        dsl::BehaviorProgram program;
        try {
            program = dsl::parse_program(program_text);
        } catch (const dsl::ParseError& e) {
            err << args.program_path << ":" << e.what() << '\n';
            return kExitFailure;
        }
        auto bound = dsl::bind_program(program, config);
        auto trace = engine::load_trace(trace_text, config);

        auto log = engine::run(config, bound, trace, engine::RunOptions{args.until_us});
        log_text = engine::serialize_log(log);
        if (args.stats) {
            stats_line = engine::stats_to_json(engine::compute_stats(log));
        }
    } catch (const IoError& e) {
        err << e.what() << '\n';
        return kExitUsage;
    } catch (const config::ConfigError& e) {
        report_config_error(e, err);
        return kExitFailure;
    } catch (const dsl::BindErrors& e) {
        for (const auto& issue : e.issues()) {
            err << args.program_path << ":" << issue.to_string() << '\n';
        }
        return kExitFailure;
    } catch (const engine::TraceError& e) {
        err << args.trace_path << ": " << e.what() << '\n';
        return kExitFailure;
    }

    if (args.out_path == "-") {
        out << log_text;
    } else {
        std::ofstream f(args.out_path, std::ios::binary);
        if (!f || !(f << log_text)) {
            err << "cannot write '" << args.out_path << "'\n";
            return kExitUsage;
        }
    }
    if (args.stats) {
        err << stats_line << '\n';
    }
    return kExitOk;
}

int cmd_stats(const std::string& log_path, std::ostream& out, std::ostream& err)
{
    try {
        auto log = engine::parse_log(read_file(log_path));
        out << engine::stats_to_json(engine::compute_stats(log)) << '\n';
        return kExitOk;
    } catch (const IoError& e) {
        err << e.what() << '\n';
        return kExitUsage;
    } catch (const engine::MalformedLog& e) {
        err << log_path << ": " << e.what() << '\n';
        return kExitFailure;
    }
}

int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Deterministic behavior runtime: validate configs, parse programs, replay traces."};
    app.require_subcommand(1);

    std::string config_path;
    auto* validate = app.add_subcommand("validate", "Check a configuration file");
    validate->add_option("-c,--config", config_path, "Configuration JSON")->required();

    std::string program_path;
    bool dump = false;
    auto* parse = app.add_subcommand("parse", "Print a behavior program in canonical form");
    parse->add_option("-b,--behaviors", program_path, "Behavior program")->required();
    parse->add_flag("--dump-ast", dump, "Print the syntax tree as JSON instead");

    RunArgs run_args;
    std::int64_t until = 0;
    auto* run = app.add_subcommand("run", "Replay a sensor trace and write the execution log");
    run->add_option("-c,--config", run_args.config_path, "Configuration JSON")->required();
    run->add_option("-b,--behaviors", run_args.program_path, "Behavior program")->required();
    run->add_option("-t,--trace", run_args.trace_path, "Sensor trace (JSON lines)")->required();
    run->add_option("-o,--out", run_args.out_path, "Log destination, '-' for stdout")->required();
    run->add_flag("--stats", run_args.stats, "Write a stats line to stderr");
    auto* until_opt = run->add_option("--until", until, "Ignore trace events at or after this time (us)")
                          ->check(CLI::NonNegativeNumber);

    std::string log_path;
    auto* stats = app.add_subcommand("stats", "Summarize an execution log");
    stats->add_option("log", log_path, "Execution log")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    if (*validate) {
        return cmd_validate(config_path, out, err);
    }
    if (*parse) {
        return cmd_parse(program_path, dump, out, err);
    }
    if (*run) {
        if (*until_opt) {
            run_args.until_us = until;
        }
        return cmd_run(run_args, out, err);
    }
    return cmd_stats(log_path, out, err);
}

} // namespace robosync::cli
