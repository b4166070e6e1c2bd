#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "smm/scenario.hpp"

namespace smm {

/// Command-line overrides applied on top of a parsed config.
struct RunOverrides {
    std::optional<std::filesystem::path> out;
    unsigned jobs = 1;
    std::optional<int> grid;
    std::optional<std::uint64_t> seed;
    /// When non-empty, only these checks run.
    std::vector<std::string> checks;
};

struct CheckOutcome {
    std::string check;
    bool pass = false;
    /// Signed margin of the check (negative means violated); see README.
    double slack = 0.0;
    std::string note;
};

struct RunSummary {
    std::string scenario;
    int grid = 0;
    std::uint64_t seed = 0;
    std::vector<CheckOutcome> checks;
    /// Wall time of the scenario; printed, never written to output files.
    double seconds = 0.0;

    bool pass() const;
};

/// Plot data for one CSV file: header plus numeric rows.
struct CsvTable {
    std::string file_name;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

/// Everything a scenario produces, ready to be written.
struct ScenarioOutcome {
    RunSummary summary;
    /// report.json contents.
    std::string report_json;
    std::vector<CsvTable> tables;
    /// Flat rows of the estimates table, one per estimate report.
    std::vector<std::vector<std::string>> estimate_rows;
};

/// Runs one scenario with the given seed and grid; never throws for check
/// failures (they become failing outcomes).
ScenarioOutcome run_scenario(const Scenario& scenario, std::uint64_t seed,
                             const std::vector<std::string>& check_filter = {});

/// Writes report.json and the CSV tables under out_dir/<scenario>/. A
/// scenario without checks writes nothing. Returns the written paths;
/// I/O errors raise std::runtime_error naming the path.
std::vector<std::filesystem::path> emit_plots(const ScenarioOutcome& outcome, const std::filesystem::path& out_dir);

/// One stable summary line: STATUS scenario check slack=... N=... seed=... note
std::string summary_line(const RunSummary& summary, const CheckOutcome& check);

struct RunResult {
    std::vector<RunSummary> summaries;
    /// 0 all checks pass, 1 some check failed, 2 config or I/O error.
    int exit_code = 0;
};

/// Loads the config, runs all scenarios on up to `jobs` threads and writes
/// outputs. Summary lines go to `out` in config order; diagnostics to `err`.
RunResult run(const std::filesystem::path& config_path, const RunOverrides& overrides, std::ostream& out,
              std::ostream& err);

}  // namespace smm
