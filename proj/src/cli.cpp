#include "seqfdr/cli.hpp"

#include "seqfdr/schedules.hpp"
#include "seqfdr/simulation.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <fstream>
#include <iostream>
#include <string_view>

namespace seqfdr::cli {

namespace {

std::optional<double> parse_pvalue_line(std::string_view line)
{
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string_view::npos)
        return std::nullopt;
    line = line.substr(first, line.find_last_not_of(" \t\r") - first + 1);
    double p = 0.0;
    const auto res = std::from_chars(line.data(), line.data() + line.size(), p);
    if (res.ec != std::errc{} || res.ptr != line.data() + line.size())
        return std::nullopt;
    return p;
}

LambdaSchedule build_schedule(const ScheduleOptions& options)
{
    return options.adaptive ? make_adaptive_schedule(options.q) : make_power_schedule(options.nu, options.q);
}

} // namespace

int cmd_stream(Procedure procedure, const ScheduleOptions& options, std::istream& in, std::ostream& out,
               std::ostream& err)
{
    if (procedure == Procedure::BH)
    {
        err << "stream: bh needs every P-value up front; use lord or lond\n";
        return kBadConfig;
    }
    if (!(options.q > 0.0 && options.q < 1.0))
    {
        err << "stream: --q must lie in (0,1)\n";
        return kBadConfig;
    }

    std::optional<OnlineTester> tester;
    try
    {
        tester.emplace(procedure, build_schedule(options));
    }
    catch (const std::exception& e)
    {
        err << "stream: " << e.what() << '\n';
        return kBadConfig;
    }

    std::string line;
    std::uint64_t line_no = 0;
    while (std::getline(in, line))
    {
        ++line_no;
        const auto p = parse_pvalue_line(line);
        Decision d;
        try
        {
            if (!p)
                throw std::domain_error("unparseable");
            d = tester->step(*p);
        }
        catch (const std::domain_error&)
        {
            err << "# error line " << line_no << '\n';
            err.flush();
            return kBadInput;
        }
        out << d.index << ' ' << format_number(d.alpha) << ' ' << format_number(d.p) << ' '
            << (d.rejected ? "REJECT" : "ACCEPT") << '\n';
        out.flush();
    }
    out << "# discoveries=" << tester->discoveries() << " n=" << tester->steps() << '\n';
    out.flush();
    return kOk;
}

int cmd_schedule(const ScheduleOptions& options, std::uint64_t head, std::ostream& out, std::ostream& err)
{
    std::optional<LambdaSchedule> schedule;
    try
    {
        schedule.emplace(build_schedule(options));
    }
    catch (const std::exception& e)
    {
        err << "schedule: " << e.what() << '\n';
        return kBadConfig;
    }

    double sum = 0.0;
    for (std::uint64_t i = 1; i <= head; ++i)
    {
        const double lambda = schedule->lambda_at(i);
        sum += lambda;
        out << i << ' ' << format_number(lambda) << '\n';
    }
    out << "# residual " << format_number(schedule->q() - sum) << '\n';
    return kOk;
}

int cmd_simulate(const SimulateOptions& options, std::ostream& err)
{
    GridSpec grid;
    try
    {
        std::ifstream config(options.config_path);
        if (!config)
            throw ConfigError("config", "cannot read " + options.config_path);
        grid = parse_config(config);
        if (options.seed)
            grid.base.seed = *options.seed;
        if (options.reps)
        {
            grid.base.reps = *options.reps;
            if (grid.base.reps < 1)
                throw ConfigError("reps", "replicate count must be >= 1");
        }
        if (options.threads)
            grid.base.threads = *options.threads;
    }
    catch (const ConfigError& e)
    {
        err << "simulate: " << e.what() << '\n';
        return kBadConfig;
    }

    std::ofstream out(options.output_path, std::ios::binary | std::ios::trunc);
    if (!out)
    {
        err << "simulate: cannot write " << options.output_path << '\n';
        return kUnwritable;
    }

    try
    {
        write_csv_header(out);
        run_grid(grid, [&out](const CellResult& cell) {
            write_csv_rows(out, cell);
            out.flush();
        });
    }
    catch (const ConfigError& e)
    {
        err << "simulate: " << e.what() << '\n';
        return kBadConfig;
    }
    catch (const std::exception& e)
    {
        err << "simulate: " << e.what() << '\n';
        return kFailure;
    }
    if (!out)
    {
        err << "simulate: write to " << options.output_path << " failed\n";
        return kUnwritable;
    }
    return kOk;
}

int run(int argc, char** argv, std::istream& in, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Online FDR control: LORD, LOND and Benjamini-Hochberg"};
    app.require_subcommand(1);

    SimulateOptions sim;
    std::uint64_t seed = 0, reps = 0;
    unsigned threads = 0;
    auto* simulate = app.add_subcommand("simulate", "Run a sparse-mixture experiment grid and write CSV");
    simulate->add_option("config", sim.config_path, "Experiment config file (key = value)")->required();
    simulate->add_option("--out", sim.output_path, "CSV output path")->required();
    auto* seed_opt = simulate->add_option("--seed", seed, "Override the config seed");
    auto* reps_opt = simulate->add_option("--reps", reps, "Override the replicate count");
    auto* threads_opt = simulate->add_option("--threads", threads, "Worker threads (0 = all cores)");

    ScheduleOptions stream_sched;
    std::string procedure_name = "lord";
    auto* stream = app.add_subcommand("stream", "Decide P-values read from stdin, one per line");
    stream->add_option("--procedure", procedure_name, "lord or lond")->capture_default_str();
    stream->add_option("--q", stream_sched.q, "FDR level")->capture_default_str();
    stream->add_option("--nu", stream_sched.nu, "Power schedule exponent")->capture_default_str();
    stream->add_flag("--adaptive", stream_sched.adaptive, "Use the 1/((i+1) log^2(i+1)) schedule");

    ScheduleOptions dump_sched;
    std::uint64_t head = 10;
    auto* schedule = app.add_subcommand("schedule", "Print the leading schedule values");
    schedule->add_option("--q", dump_sched.q, "Total budget")->capture_default_str();
    schedule->add_option("--nu", dump_sched.nu, "Power schedule exponent")->capture_default_str();
    schedule->add_flag("--adaptive", dump_sched.adaptive, "Use the 1/((i+1) log^2(i+1)) schedule");
    schedule->add_option("--head", head, "Number of values")->capture_default_str();

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::CallForHelp&)
    {
        out << app.help();
        return kOk;
    }
    catch (const CLI::ParseError& e)
    {
        err << e.what() << '\n';
        return kBadConfig;
    }

    if (simulate->parsed())
    {
        if (*seed_opt)
            sim.seed = seed;
        if (*reps_opt)
            sim.reps = reps;
        if (*threads_opt)
            sim.threads = threads;
        return cmd_simulate(sim, err);
    }
    if (stream->parsed())
    {
        Procedure procedure;
        try
        {
            procedure = parse_procedure(procedure_name);
        }
        catch (const std::invalid_argument& e)
        {
            err << "stream: " << e.what() << '\n';
            return kBadConfig;
        }
        return cmd_stream(procedure, stream_sched, in, out, err);
    }
    return cmd_schedule(dump_sched, head, out, err);
}

} // namespace seqfdr::cli
