#include "seqfdr/simulation.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <charconv>
#include <cmath>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>

namespace seqfdr {

namespace {

std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t absorb(std::uint64_t h, std::uint64_t v) { return splitmix64(h ^ splitmix64(v)); }
std::uint64_t absorb(std::uint64_t h, double v) { return absorb(h, std::bit_cast<std::uint64_t>(v)); }

std::string fmt(double v) { return format_number(v); }

// Fills `mask` with the procedure's rejections of `pvalues`.
void apply_procedure(Procedure procedure, const LambdaSchedule& schedule, double q, const std::vector<double>& pvalues,
                     std::vector<bool>& mask)
{
    mask.assign(pvalues.size(), false);
    switch (procedure)
    {
    case Procedure::Lord: {
        LordState state;
        for (std::size_t k = 0; k < pvalues.size(); ++k)
            mask[k] = lord_step(state, schedule, pvalues[k]).rejected;
        break;
    }
    case Procedure::Lond: {
        LondState state;
        for (std::size_t k = 0; k < pvalues.size(); ++k)
            mask[k] = lond_step(state, schedule, pvalues[k]).rejected;
        break;
    }
    case Procedure::BH:
        mask = bh_reject_mask(pvalues, q);
        break;
    }
}

} // namespace

std::string format_number(double value)
{
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, res.ptr);
}

LambdaSchedule make_schedule(const ScheduleSpec& spec, double q)
{
    return spec.kind == ScheduleKind::Power ? make_power_schedule(spec.nu, q) : make_adaptive_schedule(q);
}

void MixtureConfig::validate() const
{
    if (n < 1)
        throw ConfigError("n", "stream length must be >= 1");
    if (!(beta > 0.0 && beta < 1.0))
        throw ConfigError("beta", "sparsity exponent " + fmt(beta) + " must lie in (0,1)");
    if (!(r >= 0.0) || !std::isfinite(r))
        throw ConfigError("r", "signal strength " + fmt(r) + " must be finite and >= 0");
    if (!(gamma >= 1.0) || !std::isfinite(gamma))
        throw ConfigError("gamma", "tail exponent " + fmt(gamma) + " must be finite and >= 1");
    if (!(scale > 0.0) || !std::isfinite(scale))
        throw ConfigError("scale", "scale " + fmt(scale) + " must be finite and > 0");
    if (q_rule == QRule::Fixed && !(q > 0.0 && q < 1.0))
        throw ConfigError("q", "FDR level " + fmt(q) + " must lie in (0,1)");
    if (q_rule == QRule::InverseLog && n < 3)
        throw ConfigError("q_rule", "inverse-log level needs n >= 3 so that 1/log n lies in (0,1)");
    if (reps < 1)
        throw ConfigError("reps", "replicate count must be >= 1");
    if (procedures.empty())
        throw ConfigError("procedures", "at least one procedure is required");
    if (schedule.kind == ScheduleKind::Power && (!(schedule.nu > 1.0) || !std::isfinite(schedule.nu)))
        throw ConfigError("nu", "power exponent " + fmt(schedule.nu) + " must exceed 1");
    if (signal_count() == 0)
        throw ConfigError("beta", "round(n^(1-beta)) is 0, the experiment has no signals");
}

double MixtureConfig::level() const
{
    return q_rule == QRule::Fixed ? q : 1.0 / std::log(static_cast<double>(n));
}

double MixtureConfig::epsilon() const
{
    return std::pow(static_cast<double>(n), -beta);
}

double MixtureConfig::mu() const
{
    return std::pow(gamma * r * std::log(static_cast<double>(n)), 1.0 / gamma);
}

std::uint64_t MixtureConfig::signal_count() const
{
    return static_cast<std::uint64_t>(std::llround(std::pow(static_cast<double>(n), 1.0 - beta)));
}

std::uint64_t replicate_seed(const MixtureConfig& config, std::uint64_t replicate)
{
    std::uint64_t h = splitmix64(config.seed);
    h = absorb(h, config.n);
    h = absorb(h, config.beta);
    h = absorb(h, config.gamma);
    h = absorb(h, config.scale);
    return absorb(h, replicate);
}

MixtureDataset make_mixture(const MixtureConfig& config, std::uint64_t replicate)
{
    config.validate();
    Rng rng(replicate_seed(config, replicate));

    const std::uint64_t n = config.n;
    const std::uint64_t m = config.signal_count();

    // partial Fisher-Yates: the first m slots end up a uniform m-subset
    std::vector<std::uint64_t> order(n);
    std::iota(order.begin(), order.end(), std::uint64_t{1});
    for (std::uint64_t k = 0; k < m; ++k)
    {
        const std::uint64_t j = std::uniform_int_distribution<std::uint64_t>(k, n - 1)(rng);
        std::swap(order[k], order[j]);
    }
    order.resize(m);

    MixtureDataset data;
    data.statistics.resize(n);
    gg_fill(config.kernel(), rng, data.statistics);
    data.mu = config.mu();
    data.epsilon = config.epsilon();
    for (std::uint64_t i : order)
        data.statistics[i - 1] += data.mu;
    data.truth = TruthLabels(n, std::move(order));
    return data;
}

const std::vector<MetricsRecord>& CellResult::records_for(Procedure procedure) const
{
    for (std::size_t k = 0; k < procedures.size(); ++k)
    {
        if (procedures[k] == procedure)
            return records[k];
    }
    throw std::invalid_argument("procedure " + std::string(to_string(procedure)) + " was not run in this cell");
}

PooledMetrics CellResult::pooled(Procedure procedure) const
{
    return pool(records_for(procedure));
}

CellResult run_cell(const MixtureConfig& config)
{
    config.validate();

    CellResult result;
    result.config = config;
    result.q = config.level();
    result.procedures = config.procedures;
    result.records.assign(config.procedures.size(), std::vector<MetricsRecord>(config.reps));

    const LambdaSchedule schedule = make_schedule(config.schedule, result.q);
    const GGKernel kernel = config.kernel();

    auto run_replicate = [&](std::uint64_t rep) {
        const MixtureDataset data = make_mixture(config, rep);
        std::vector<double> pvalues(data.statistics.size());
        std::transform(data.statistics.begin(), data.statistics.end(), pvalues.begin(),
                       [&kernel](double x) { return pvalue(kernel, x); });
        std::vector<bool> mask;
        for (std::size_t k = 0; k < config.procedures.size(); ++k)
        {
            apply_procedure(config.procedures[k], schedule, result.q, pvalues, mask);
            result.records[k][rep] = evaluate(mask, data.truth, config.n, rep);
        }
    };

    unsigned threads = config.threads != 0 ? config.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, config.reps));
    if (threads <= 1)
    {
        for (std::uint64_t rep = 0; rep < config.reps; ++rep)
            run_replicate(rep);
        return result;
    }

    std::atomic<std::uint64_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    {
        std::vector<std::jthread> workers;
        for (unsigned t = 0; t < threads; ++t)
        {
            workers.emplace_back([&] {
                for (std::uint64_t rep = next++; rep < config.reps; rep = next++)
                {
                    try
                    {
                        run_replicate(rep);
                    }
                    catch (...)
                    {
                        std::lock_guard lock(failure_mutex);
                        if (!failure)
                            failure = std::current_exception();
                    }
                }
            });
        }
    }
    if (failure)
        std::rethrow_exception(failure);
    return result;
}

std::vector<MetricsRecord> run_cell(const MixtureConfig& config, Procedure procedure)
{
    MixtureConfig single = config;
    single.procedures = {procedure};
    return run_cell(single).records.front();
}

std::vector<MixtureConfig> GridSpec::cells() const
{
    std::vector<MixtureConfig> out;
    for (std::uint64_t n : n_values)
    {
        for (double beta : beta_values)
        {
            for (double r : r_values)
            {
                MixtureConfig cell = base;
                cell.n = n;
                cell.beta = beta;
                cell.r = r;
                out.push_back(cell);
            }
        }
    }
    return out;
}

void run_grid(const GridSpec& grid, const std::function<void(const CellResult&)>& on_cell)
{
    if (grid.n_values.empty())
        throw ConfigError("n", "grid needs at least one value");
    if (grid.beta_values.empty())
        throw ConfigError("beta", "grid needs at least one value");
    if (grid.r_values.empty())
        throw ConfigError("r", "grid needs at least one value");
    const auto cells = grid.cells();
    for (const auto& cell : cells)
        cell.validate();
    for (const auto& cell : cells)
        on_cell(run_cell(cell));
}

std::vector<CellResult> run_grid(const MixtureConfig& base, const std::vector<double>& r_values,
                                 const std::vector<std::uint64_t>& n_values)
{
    GridSpec grid{base, n_values, {base.beta}, r_values};
    std::vector<CellResult> out;
    run_grid(grid, [&out](const CellResult& cell) { out.push_back(cell); });
    return out;
}

void write_csv_header(std::ostream& out)
{
    out << kCsvHeader << '\n';
}

void write_csv_rows(std::ostream& out, const CellResult& cell)
{
    const auto& c = cell.config;
    const std::string params = fmt(c.beta) + ',' + fmt(c.r) + ',' + fmt(c.gamma) + ',' + fmt(cell.q);
    for (std::size_t k = 0; k < cell.procedures.size(); ++k)
    {
        const std::string_view name = to_string(cell.procedures[k]);
        for (const auto& rec : cell.records[k])
        {
            out << rec.replicate << ',' << rec.n_eval << ',' << name << ',' << params << ',' << fmt(rec.fdp) << ','
                << fmt(rec.fnp) << ',' << rec.rejections << '\n';
        }
    }
    for (std::size_t k = 0; k < cell.procedures.size(); ++k)
    {
        const std::string_view name = to_string(cell.procedures[k]);
        const PooledMetrics p = pool(cell.records[k]);
        out << "mean," << p.n_eval << ',' << name << ',' << params << ',' << fmt(p.fdr) << ',' << fmt(p.fnr) << ','
            << fmt(p.mean_rejections) << '\n';
        out << "se," << p.n_eval << ',' << name << ',' << params << ',' << fmt(p.fdr_se) << ',' << fmt(p.fnr_se) << ','
            << fmt(p.rejections_se) << '\n';
    }
}

namespace {

std::string trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos)
        return {};
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_list(const std::string& value)
{
    std::vector<std::string> items;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ','))
        items.push_back(trim(item));
    return items;
}

double parse_real(const std::string& key, const std::string& text)
{
    double v = 0.0;
    const char* end = text.data() + text.size();
    const auto res = std::from_chars(text.data(), end, v);
    if (text.empty() || res.ec != std::errc{} || res.ptr != end)
        throw ConfigError(key, "'" + text + "' is not a number");
    return v;
}

std::uint64_t parse_count(const std::string& key, const std::string& text)
{
    std::uint64_t v = 0;
    const char* end = text.data() + text.size();
    const auto res = std::from_chars(text.data(), end, v);
    if (res.ec == std::errc{} && res.ptr == end && !text.empty())
        return v;
    // allow 1e5 style counts when they are exact integers
    const double d = parse_real(key, text);
    if (d >= 0.0 && d <= 0x1p63 && d == std::floor(d))
        return static_cast<std::uint64_t>(d);
    throw ConfigError(key, "'" + text + "' is not a non-negative integer");
}

} // namespace

GridSpec parse_config(std::istream& in)
{
    static const std::set<std::string> known = {"n",     "beta",  "r",    "gamma",      "scale",    "q_rule", "q",
                                                "seed",  "reps",  "procedures", "schedule", "nu",     "threads"};
    std::map<std::string, std::string> entries;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line))
    {
        ++line_no;
        const auto hash = line.find('#');
        const std::string content = trim(std::string_view(line).substr(0, hash));
        if (content.empty())
            continue;
        const auto eq = content.find('=');
        if (eq == std::string::npos)
            throw ConfigError(trim(content), "line " + std::to_string(line_no) + " is not of the form key = value");
        const std::string key = trim(std::string_view(content).substr(0, eq));
        const std::string value = trim(std::string_view(content).substr(eq + 1));
        if (!known.count(key))
            throw ConfigError(key, "unknown key");
        if (value.empty())
            throw ConfigError(key, "missing value");
        if (!entries.emplace(key, value).second)
            throw ConfigError(key, "given more than once");
    }

    for (const char* required : {"n", "beta", "r"})
    {
        if (!entries.count(required))
            throw ConfigError(required, "required key is missing");
    }

    GridSpec grid;
    MixtureConfig& base = grid.base;
    for (const auto& [key, value] : entries)
    {
        if (key == "n")
        {
            for (const auto& item : split_list(value))
                grid.n_values.push_back(parse_count(key, item));
        }
        else if (key == "beta")
        {
            for (const auto& item : split_list(value))
                grid.beta_values.push_back(parse_real(key, item));
        }
        else if (key == "r")
        {
            for (const auto& item : split_list(value))
                grid.r_values.push_back(parse_real(key, item));
        }
        else if (key == "gamma")
            base.gamma = parse_real(key, value);
        else if (key == "scale")
            base.scale = parse_real(key, value);
        else if (key == "q")
            base.q = parse_real(key, value);
        else if (key == "q_rule")
        {
            if (value == "fixed")
                base.q_rule = QRule::Fixed;
            else if (value == "inverse-log")
                base.q_rule = QRule::InverseLog;
            else
                throw ConfigError(key, "'" + value + "' is neither fixed nor inverse-log");
        }
        else if (key == "seed")
            base.seed = parse_count(key, value);
        else if (key == "reps")
            base.reps = parse_count(key, value);
        else if (key == "threads")
            base.threads = static_cast<unsigned>(parse_count(key, value));
        else if (key == "nu")
            base.schedule.nu = parse_real(key, value);
        else if (key == "schedule")
        {
            if (value == "power")
                base.schedule.kind = ScheduleKind::Power;
            else if (value == "adaptive")
                base.schedule.kind = ScheduleKind::AdaptiveLog;
            else
                throw ConfigError(key, "'" + value + "' is neither power nor adaptive");
        }
        else if (key == "procedures")
        {
            base.procedures.clear();
            for (const auto& item : split_list(value))
            {
                try
                {
                    const Procedure p = parse_procedure(item);
                    if (std::find(base.procedures.begin(), base.procedures.end(), p) != base.procedures.end())
                        throw ConfigError(key, "procedure '" + item + "' listed twice");
                    base.procedures.push_back(p);
                }
                catch (const ConfigError&)
                {
                    throw;
                }
                catch (const std::invalid_argument& e)
                {
                    throw ConfigError(key, e.what());
                }
            }
        }
    }

    base.n = grid.n_values.front();
    base.beta = grid.beta_values.front();
    base.r = grid.r_values.front();
    for (const auto& cell : grid.cells())
        cell.validate();
    return grid;
}

} // namespace seqfdr
