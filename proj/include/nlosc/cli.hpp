#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "nlosc/numerics.hpp"
#include "nlosc/perturbation.hpp"

namespace nlosc::cli {

enum class Command { Measure, Sweep, Scatter, Curve, OracleCheck };
enum class Format { Csv, Json };

struct RunConfig {
    Command command = Command::Measure;
    std::string potential;  // text form, e.g. "morse:D=1,alpha=1"
    Format format = Format::Csv;
    std::optional<std::string> out_path;
    GridOptions grid;
    std::uint64_t seed = 0;

    // sweep / curve
    std::string axis;
    double from = 0.0;
    double to = 0.0;
    std::size_t points = 0;
    bool log_spacing = false;

    // scatter
    std::size_t n = 0;
    perturbation::Range eps3{-0.1, 0.1};
    perturbation::Range eps4{-0.25, 0.25};
    double omega = 1.0;

    std::size_t threads = 0;  // 0: hardware concurrency
};

/// Writes the command's table to `out`; returns the process exit status.
int run_measure(const RunConfig& config, std::ostream& out, std::ostream& err);
int run_sweep(const RunConfig& config, std::ostream& out, std::ostream& err);
int run_scatter(const RunConfig& config, std::ostream& out, std::ostream& err);
int run_curve(const RunConfig& config, std::ostream& out, std::ostream& err);
int run_oracle_check(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Parses argv (argv[0] is the program name) and dispatches. Diagnostics go
/// to `err` as a single line.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Number formatting shared by CSV and JSON: 12 significant digits.
std::string format_number(double v);

}  // namespace nlosc::cli
