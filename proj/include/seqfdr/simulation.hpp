#ifndef SEQFDR_SIMULATION_HPP
#define SEQFDR_SIMULATION_HPP

#include "seqfdr/distributions.hpp"
#include "seqfdr/engines.hpp"
#include "seqfdr/metrics.hpp"
#include "seqfdr/schedules.hpp"

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace seqfdr {

/// Invalid experiment configuration; key() names the offending field.
class ConfigError : public std::invalid_argument
{
public:
    ConfigError(std::string key, const std::string& message)
        : std::invalid_argument("config key '" + key + "': " + message), key_(std::move(key))
    {
    }
    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

enum class QRule
{
    Fixed,      ///< q as given
    InverseLog, ///< q = 1 / log n
};

struct ScheduleSpec
{
    ScheduleKind kind = ScheduleKind::Power;
    double nu = 1.05;
};

LambdaSchedule make_schedule(const ScheduleSpec& spec, double q);

/// One cell of the sparse mixture experiment: n statistics, round(n^(1-beta))
/// of them shifted by mu = (gamma r log n)^(1/gamma).
struct MixtureConfig
{
    std::uint64_t n = 10000;
    double beta = 0.5;
    double r = 0.5;
    double gamma = 2.0;
    double scale = 1.0;
    QRule q_rule = QRule::Fixed;
    double q = 0.1;
    std::uint64_t seed = 1;
    std::uint64_t reps = 100;
    std::vector<Procedure> procedures{Procedure::Lord, Procedure::Lond, Procedure::BH};
    ScheduleSpec schedule;
    /// Worker threads for replicates; 0 picks the hardware concurrency.
    unsigned threads = 0;

    /// Throws ConfigError.
    void validate() const;

    GGKernel kernel() const { return GGKernel(gamma, scale); }
    double level() const;
    double epsilon() const;
    double mu() const;
    std::uint64_t signal_count() const;
};

struct MixtureDataset
{
    std::vector<double> statistics;
    TruthLabels truth;
    double mu = 0.0;
    double epsilon = 0.0;
};

/// Seed for one replicate. Depends on (seed, n, beta, gamma, scale, replicate)
/// but not on r, so cells that differ only in signal strength see the same
/// noise and signal positions.
std::uint64_t replicate_seed(const MixtureConfig& config, std::uint64_t replicate);

/// Deterministic in (config, replicate). Throws ConfigError.
MixtureDataset make_mixture(const MixtureConfig& config, std::uint64_t replicate);

/// Per-replicate records (final horizon) for each procedure of a cell.
struct CellResult
{
    MixtureConfig config;
    double q = 0.0;
    std::vector<Procedure> procedures;
    /// records[k][rep] belongs to procedures[k].
    std::vector<std::vector<MetricsRecord>> records;

    const std::vector<MetricsRecord>& records_for(Procedure procedure) const;
    PooledMetrics pooled(Procedure procedure) const;
};

/// Runs every replicate of the cell. Each dataset is shared by all the
/// cell's procedures; BH sees the full vector, LORD and LOND a stream in
/// index order.
CellResult run_cell(const MixtureConfig& config);

/// Records of a single procedure.
std::vector<MetricsRecord> run_cell(const MixtureConfig& config, Procedure procedure);

/// Cross product of n, beta and r values around a base configuration.
struct GridSpec
{
    MixtureConfig base;
    std::vector<std::uint64_t> n_values;
    std::vector<double> beta_values;
    std::vector<double> r_values;

    std::vector<MixtureConfig> cells() const;
};

/// Runs cells in order (n outermost, r innermost) and hands each to `on_cell`
/// as soon as it completes.
void run_grid(const GridSpec& grid, const std::function<void(const CellResult&)>& on_cell);
std::vector<CellResult> run_grid(const MixtureConfig& base, const std::vector<double>& r_values,
                                 const std::vector<std::uint64_t>& n_values);

/// CSV schema shared by all experiment output.
inline constexpr const char* kCsvHeader = "replicate,n_eval,procedure,beta,r,gamma,q,fdp,fnp,rejections";

void write_csv_header(std::ostream& out);
/// Per-replicate rows, then a `mean` and an `se` row per procedure.
void write_csv_rows(std::ostream& out, const CellResult& cell);

/// Key-value experiment file. `n`, `beta` and `r` take comma-separated
/// lists. Throws ConfigError.
GridSpec parse_config(std::istream& in);

/// Shortest decimal text that reads back to the same double.
std::string format_number(double value);

} // namespace seqfdr

#endif // SEQFDR_SIMULATION_HPP
