#include "seqfdr/engines.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <stdexcept>
#include <string>

namespace seqfdr {

namespace {

void check_level(double q)
{
    if (!(q > 0.0 && q < 1.0))
        throw std::domain_error("FDR level q must lie in (0, 1), got " + std::to_string(q));
}

} // namespace

void detail::throw_bad_pvalue(double p)
{
    throw std::domain_error("P-value must lie in [0, 1], got " + std::to_string(p));
}

std::string_view to_string(Procedure procedure) noexcept
{
    switch (procedure)
    {
    case Procedure::Lord:
        return "lord";
    case Procedure::Lond:
        return "lond";
    case Procedure::BH:
        return "bh";
    }
    return "unknown";
}

Procedure parse_procedure(std::string_view name)
{
    std::string lower(name);
    std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
    if (lower == "lord")
        return Procedure::Lord;
    if (lower == "lond")
        return Procedure::Lond;
    if (lower == "bh")
        return Procedure::BH;
    throw std::invalid_argument("unknown procedure '" + std::string(name) + "' (expected lord, lond or bh)");
}

OnlineTester::OnlineTester(Procedure procedure, LambdaSchedule schedule)
    : procedure_(procedure), schedule_(std::move(schedule))
{
    if (procedure == Procedure::BH)
        throw std::invalid_argument("BH needs the full P-value vector and cannot run as a stream");
}

Decision OnlineTester::step(double p)
{
    const Decision d = procedure_ == Procedure::Lord ? lord_step(lord_, schedule_, p) : lond_step(lond_, schedule_, p);
    ++steps_;
    discoveries_ += d.rejected ? 1 : 0;
    return d;
}

double bh_threshold(std::span<const double> pvalues, double q)
{
    check_level(q);
    for (double p : pvalues)
        check_pvalue(p);

    std::vector<double> sorted(pvalues.begin(), pvalues.end());
    std::sort(sorted.begin(), sorted.end());
    const double n = static_cast<double>(sorted.size());
    for (std::size_t j = sorted.size(); j > 0; --j)
    {
        if (sorted[j - 1] <= q * static_cast<double>(j) / n)
            return sorted[j - 1];
    }
    return -1.0;
}

std::vector<bool> bh_reject_mask(std::span<const double> pvalues, double q)
{
    const double cutoff = bh_threshold(pvalues, q);
    std::vector<bool> mask(pvalues.size(), false);
    for (std::size_t i = 0; i < pvalues.size(); ++i)
        mask[i] = pvalues[i] <= cutoff;
    return mask;
}

std::vector<std::uint64_t> bh_reject(std::span<const double> pvalues, double q)
{
    const double cutoff = bh_threshold(pvalues, q);
    std::vector<std::uint64_t> rejected;
    for (std::size_t i = 0; i < pvalues.size(); ++i)
    {
        if (pvalues[i] <= cutoff)
            rejected.push_back(i + 1);
    }
    return rejected;
}

} // namespace seqfdr
