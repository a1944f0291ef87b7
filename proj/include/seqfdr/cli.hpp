#ifndef SEQFDR_CLI_HPP
#define SEQFDR_CLI_HPP

#include "seqfdr/engines.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

namespace seqfdr::cli {

enum ExitCode : int
{
    kOk = 0,
    kFailure = 1,
    kBadConfig = 2,
    kUnwritable = 3,
    kBadInput = 4,
};

struct ScheduleOptions
{
    double q = 0.1;
    double nu = 1.05;
    bool adaptive = false;
};

/// Reads one P-value per line and answers each with `index alpha p REJECT|ACCEPT`,
/// flushed before the next line is read. Ends with `# discoveries=D n=i`.
int cmd_stream(Procedure procedure, const ScheduleOptions& options, std::istream& in, std::ostream& out,
               std::ostream& err);

/// Prints `i lambda_i` for i = 1..head, then `# residual <q - partial sum>`.
int cmd_schedule(const ScheduleOptions& options, std::uint64_t head, std::ostream& out, std::ostream& err);

struct SimulateOptions
{
    std::string config_path;
    std::string output_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> reps;
    std::optional<unsigned> threads;
};

/// Runs the experiment grid described by the config file and writes the CSV.
int cmd_simulate(const SimulateOptions& options, std::ostream& err);

/// Full command-line entry point (simulate | stream | schedule).
int run(int argc, char** argv, std::istream& in, std::ostream& out, std::ostream& err);

} // namespace seqfdr::cli

#endif // SEQFDR_CLI_HPP
