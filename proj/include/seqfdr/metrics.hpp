#ifndef SEQFDR_METRICS_HPP
#define SEQFDR_METRICS_HPP

#include "seqfdr/engines.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace seqfdr {

/// Ground truth for a stream of length n: the 1-based positions of false
/// nulls (signals). Engines never see this.
class TruthLabels
{
public:
    TruthLabels() = default;
    /// Throws std::invalid_argument for out-of-range or duplicate indices.
    TruthLabels(std::uint64_t n, std::vector<std::uint64_t> false_null_indices);

    std::uint64_t n() const noexcept { return n_; }
    /// Sorted ascending.
    std::span<const std::uint64_t> signals() const noexcept { return signals_; }
    std::uint64_t signal_count() const noexcept { return signals_.size(); }
    bool is_signal(std::uint64_t index) const { return index >= 1 && index <= n_ && mask_[index - 1]; }

private:
    std::uint64_t n_ = 0;
    std::vector<std::uint64_t> signals_;
    std::vector<bool> mask_;
};

/// Per-replicate outcome at one evaluation horizon.
struct MetricsRecord
{
    std::uint64_t n_eval = 0;
    double fdp = 0.0;
    double fnp = 0.0;
    std::uint64_t rejections = 0;
    std::uint64_t replicate = 0;
};

/// Means and standard errors over replicates. fdr and fnr estimate FDR_n and
/// FNR_n; se uses the unbiased sample variance and is 0 for one replicate.
struct PooledMetrics
{
    std::uint64_t n_eval = 0;
    std::uint64_t reps = 0;
    double fdr = 0.0;
    double fdr_se = 0.0;
    double fnr = 0.0;
    double fnr_se = 0.0;
    double risk = 0.0;
    double mean_rejections = 0.0;
    double rejections_se = 0.0;
};

/// Rejection flags by position, taken from a full decision sequence.
/// Throws std::invalid_argument unless decisions are indexed 1..size in order.
std::vector<bool> rejection_mask(std::span<const Decision> decisions);

/// False discovery proportion, 0 when nothing is rejected. Throws
/// std::invalid_argument if the decisions do not cover exactly 1..truth.n().
double fdp(std::span<const Decision> decisions, const TruthLabels& truth);
/// Missed signals over signals, 0 when there are no signals.
double fnp(std::span<const Decision> decisions, const TruthLabels& truth);

/// Evaluates the first `horizon` positions of a rejection mask.
MetricsRecord evaluate(const std::vector<bool>& rejected, const TruthLabels& truth, std::uint64_t horizon,
                       std::uint64_t replicate = 0);

/// One record per horizon (ascending), computed in a single pass.
std::vector<MetricsRecord> evaluate_path(const std::vector<bool>& rejected, const TruthLabels& truth,
                                         std::span<const std::uint64_t> horizons, std::uint64_t replicate = 0);

/// Horizons ceil(n / 2^k), k = 0, 1, ..., down to the smallest one >= 10,
/// ascending. {n} when n < 10.
std::vector<std::uint64_t> horizon_grid(std::uint64_t n);

/// Throws std::invalid_argument for an empty list or mixed horizons.
PooledMetrics pool(std::span<const MetricsRecord> records);

} // namespace seqfdr

#endif // SEQFDR_METRICS_HPP
