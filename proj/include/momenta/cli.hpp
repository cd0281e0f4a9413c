/**
 * Command-line entry point. Subcommands run verification suites and emit a
 * JSON report (schema 1) to stdout or to the --report path.
 *
 * Exit codes: 0 all checks pass, 2 some check fails, 1 usage or input error.
 */
#ifndef MOMENTA_CLI_HPP
#define MOMENTA_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

namespace momenta {

/// args excludes the program name.
int execute(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// The report with its wall-time field removed; equal for equal seeds and commands.
nlohmann::json without_timing(nlohmann::json report);

}  // namespace momenta

#endif
