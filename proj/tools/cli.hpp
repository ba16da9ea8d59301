#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace qtrace::cli {

enum ExitCode { exit_pass = 0, exit_check_failed = 1, exit_usage = 2 };

/// Malformed arguments or input files.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Everything a run depends on. Input files are embedded so that a run can be
/// repeated from its manifest alone.
struct Request {
    std::vector<std::string> command;
    nlohmann::json params = nlohmann::json::object();
    nlohmann::json inputs = nlohmann::json::object();
    std::string timestamp;
};

struct Outcome {
    nlohmann::json report;
    /// Set for coefficient tables requested with --csv.
    std::string csv;
    int exit_code = exit_pass;
};

/// Runs a parsed request; throws InputError (and std::invalid_argument from the
/// library) for bad input.
Outcome execute(const Request& request);

/// Request stored in the "manifest" of an earlier report (or a bare manifest).
Request request_from_manifest(const nlohmann::json& report_or_manifest);

/// Full command line entry point; argv excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Worker count for independent checks: QTRACE_THREADS if set and positive,
/// otherwise the hardware concurrency.
unsigned thread_limit();

}  // namespace qtrace::cli
