#pragma once

// Subcommand orchestration shared by the command-line tool and the tests.

#include "optocirc/config.hpp"
#include "optocirc/csv.hpp"
#include "optocirc/error.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace optocirc {

enum ExitCode : int {
    exit_ok = 0,
    exit_other = 1,
    exit_usage = 2,  // configuration or command-line error
    exit_io = 3,
    exit_domain = 4,
    exit_singular = 5,
    exit_iteration = 6,
    exit_truncation = 7,
};

int exit_code_for(ErrorKind kind);

const std::vector<std::string>& subcommand_names();

struct RunOptions {
    std::optional<std::string> output;       // overrides [output] path
    std::optional<FrequencyGrid> grid;       // overrides [grid]
};

struct NamedTable {
    std::string role;  // "main" or an auxiliary name such as "oracle"
    Table table;
};

struct RunResult {
    std::vector<NamedTable> tables;
    std::vector<std::string> notes;  // human-readable diagnostics
};

// Throws Error subclasses; ConfigError for an unknown subcommand or a config
// that does not fit it.
RunResult run_subcommand(const std::string& name, const RunConfig& cfg, const RunOptions& opts = {});

// Where each table goes for a given output path: the main table to the path
// itself, auxiliary tables next to it as <stem>_<role>.csv.
std::string auxiliary_path(const std::string& path, const std::string& role);

// Writes all tables (or renders them to one string when path is empty).
std::string emit_tables(const RunResult& res, const std::string& path);

} // namespace optocirc
