#include "seqfdr/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace seqfdr {

namespace {

double ratio(std::uint64_t num, std::uint64_t den)
{
    return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

struct MeanSe
{
    double mean;
    double se;
};

template <class Get>
MeanSe mean_se(std::span<const MetricsRecord> records, Get get)
{
    const double k = static_cast<double>(records.size());
    double mean = 0.0;
    for (const auto& r : records)
        mean += get(r);
    mean /= k;
    if (records.size() < 2)
        return {mean, 0.0};
    double ss = 0.0;
    for (const auto& r : records)
    {
        const double d = get(r) - mean;
        ss += d * d;
    }
    return {mean, std::sqrt(ss / (k - 1.0) / k)};
}

} // namespace

TruthLabels::TruthLabels(std::uint64_t n, std::vector<std::uint64_t> false_null_indices)
    : n_(n), signals_(std::move(false_null_indices)), mask_(n, false)
{
    std::sort(signals_.begin(), signals_.end());
    for (std::size_t k = 0; k < signals_.size(); ++k)
    {
        const std::uint64_t i = signals_[k];
        if (i < 1 || i > n)
            throw std::invalid_argument("TruthLabels: index " + std::to_string(i) + " outside 1.." + std::to_string(n));
        if (k > 0 && signals_[k - 1] == i)
            throw std::invalid_argument("TruthLabels: duplicate index " + std::to_string(i));
        mask_[i - 1] = true;
    }
}

std::vector<bool> rejection_mask(std::span<const Decision> decisions)
{
    std::vector<bool> mask(decisions.size(), false);
    for (std::size_t k = 0; k < decisions.size(); ++k)
    {
        if (decisions[k].index != k + 1)
            throw std::invalid_argument("decisions must be indexed 1..n in stream order");
        mask[k] = decisions[k].rejected;
    }
    return mask;
}

namespace {

MetricsRecord evaluate_decisions(std::span<const Decision> decisions, const TruthLabels& truth)
{
    if (decisions.size() != truth.n())
        throw std::invalid_argument("decision count " + std::to_string(decisions.size()) +
                                    " does not match truth length " + std::to_string(truth.n()));
    return evaluate(rejection_mask(decisions), truth, truth.n());
}

} // namespace

double fdp(std::span<const Decision> decisions, const TruthLabels& truth)
{
    return evaluate_decisions(decisions, truth).fdp;
}

double fnp(std::span<const Decision> decisions, const TruthLabels& truth)
{
    return evaluate_decisions(decisions, truth).fnp;
}

MetricsRecord evaluate(const std::vector<bool>& rejected, const TruthLabels& truth, std::uint64_t horizon,
                       std::uint64_t replicate)
{
    const std::uint64_t h[] = {horizon};
    return evaluate_path(rejected, truth, h, replicate).front();
}

std::vector<MetricsRecord> evaluate_path(const std::vector<bool>& rejected, const TruthLabels& truth,
                                         std::span<const std::uint64_t> horizons, std::uint64_t replicate)
{
    if (rejected.size() != truth.n())
        throw std::invalid_argument("rejection mask length does not match truth length");
    if (!std::is_sorted(horizons.begin(), horizons.end()))
        throw std::invalid_argument("horizons must be ascending");
    if (!horizons.empty() && horizons.back() > truth.n())
        throw std::invalid_argument("horizon exceeds stream length");

    std::vector<MetricsRecord> out;
    out.reserve(horizons.size());
    std::uint64_t rejections = 0, false_rejections = 0, signals = 0, missed = 0;
    std::uint64_t pos = 0;
    for (std::uint64_t h : horizons)
    {
        for (; pos < h; ++pos)
        {
            const bool signal = truth.is_signal(pos + 1);
            const bool rej = rejected[pos];
            rejections += rej;
            false_rejections += rej && !signal;
            signals += signal;
            missed += signal && !rej;
        }
        out.push_back({h, ratio(false_rejections, rejections), ratio(missed, signals), rejections, replicate});
    }
    return out;
}

std::vector<std::uint64_t> horizon_grid(std::uint64_t n)
{
    std::vector<std::uint64_t> grid;
    if (n < 10)
        return {n};
    for (std::uint64_t d = 1; ; d *= 2)
    {
        const std::uint64_t h = (n + d - 1) / d;
        if (h < 10)
            break;
        if (grid.empty() || grid.back() != h)
            grid.push_back(h);
    }
    std::reverse(grid.begin(), grid.end());
    return grid;
}

PooledMetrics pool(std::span<const MetricsRecord> records)
{
    if (records.empty())
        throw std::invalid_argument("pool: no records");
    for (const auto& r : records)
    {
        if (r.n_eval != records.front().n_eval)
            throw std::invalid_argument("pool: records evaluated at different horizons");
    }
    const auto f = mean_se(records, [](const MetricsRecord& r) { return r.fdp; });
    const auto g = mean_se(records, [](const MetricsRecord& r) { return r.fnp; });
    const auto k = mean_se(records, [](const MetricsRecord& r) { return static_cast<double>(r.rejections); });
    PooledMetrics out;
    out.n_eval = records.front().n_eval;
    out.reps = records.size();
    out.fdr = f.mean;
    out.fdr_se = f.se;
    out.fnr = g.mean;
    out.fnr_se = g.se;
    out.risk = f.mean + g.mean;
    out.mean_rejections = k.mean;
    out.rejections_se = k.se;
    return out;
}

} // namespace seqfdr
