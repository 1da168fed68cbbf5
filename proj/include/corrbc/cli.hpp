#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>

#include <json.hpp>

namespace corrbc {

// Bad config: unknown key, wrong type, or a value outside its domain. Maps to exit 2.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
    std::string command;
    nlohmann::json parameters = nlohmann::json::object();
    std::uint64_t seed = 0;
    std::string output_path;  // empty: stdout
    std::string format = "csv";
    unsigned threads = 1;
};

// Flat JSON document; reserved keys command, seed, output_path, format, threads.
ExperimentConfig parse_config(const nlohmann::json& doc);

struct RunOutcome {
    std::string artifact;
    std::size_t rows = 0;
    std::size_t nonconverged = 0;
    bool failed_checks = false;
    std::string report;  // per-property lines for validate
};

// Executes one command. Throws ConfigError for parameter problems.
RunOutcome execute(const ExperimentConfig& config);

// Default worker cap: CORRBC_THREADS if set, else hardware concurrency.
unsigned default_threads();

// Full command-line entry point; returns the process exit status.
int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace corrbc
