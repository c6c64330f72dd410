#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "zw/zw_measure.hpp"

namespace zw::cli {

enum ExitCode {
    kOk = 0,
    kConfigError = 2,
    kInadmissible = 3,
    kNumericalFailure = 4,
};

struct RunConfig {
    std::string command;  // measure | kernel-n | kernel-limit | converge | sample | verify
    meas::ZWParams params;
    int n = 3;
    std::vector<int> n_list;
    double window = 25.0;
    std::vector<double> grid;
    std::uint64_t seed = 1;
    int count = 100;
    double tolerance = 1e-8;
    std::string output;       // file name within the output directory
    bool timestamps = false;  // off by default so outputs are byte-stable
    int threads = 1;
};

// Parses the JSON config; throws DomainError with a message on bad input.
RunConfig parse_config(const std::string& json_text, const std::string& command);

// Runs one command; returns a process exit code.
int run_command(const RunConfig& cfg, const std::string& out_dir);

// Full command-line entry point.
int run(int argc, const char* const* argv);

}  // namespace zw::cli
