#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "smm/model_space.hpp"
#include "smm/nonlinearity.hpp"
#include "smm/solver.hpp"

namespace smm {

/// Malformed or inconsistent configuration. The message names the location
/// (line/column for syntax errors, a key path such as scenarios[1].space.n
/// otherwise).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Names accepted in a scenario's `checks` list.
inline constexpr std::string_view kCheckNames[] = {"local",  "global", "harnack",    "liouville",
                                                   "identities", "kernel", "comparison", "convergence"};

bool is_check_name(std::string_view name);

struct InitialSpec {
    enum class Kind { automatic, constant, random };
    Kind kind = Kind::automatic;
    double level = 1.0;
    /// Relative size of the seeded smooth perturbation (random only), < 1.
    double amplitude = 0.3;
};

struct ParamsSpec {
    bool optimize = false;
    double mu = 2.0;
    double eps = 0.5;
    std::optional<double> R;
    double c_tol = 10.0;
};

struct KernelSpec {
    std::uint64_t samples = 100000;
    double tolerance = 1e-10;
};

struct Scenario {
    std::string name;
    std::optional<ModelSpace> space;
    std::optional<NonlinearityFamily> family;
    /// Set for manufactured families; `family` then holds the matching source.
    std::optional<ExactProfile> exact;
    std::optional<double> dirichlet;
    InitialSpec initial;
    ParamsSpec params;
    SolverConfig solver;
    int grid = 512;
    std::vector<int> refinement;
    std::vector<std::string> checks;
    /// Multiply the solved field by 1 + sin(10 r) before checking.
    bool corrupt = false;
    std::optional<std::uint64_t> seed;
    KernelSpec kernel;

    bool needs_solution() const;
};

struct Config {
    std::uint64_t seed = 0;
    std::string output_dir = "out";
    std::vector<Scenario> scenarios;
};

/// Parses the JSON scenario schema documented in the README.
Config parse_config(std::string_view text);

/// Reads and parses a config file; unreadable files raise ConfigError.
Config load_config(const std::filesystem::path& path);

}  // namespace smm
