#ifndef SEQFDR_ENGINES_HPP
#define SEQFDR_ENGINES_HPP

#include "seqfdr/schedules.hpp"

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace seqfdr {

enum class Procedure
{
    Lord,
    Lond,
    BH,
};

std::string_view to_string(Procedure procedure) noexcept;
/// Accepts "lord", "lond", "bh" in any case. Throws std::invalid_argument.
Procedure parse_procedure(std::string_view name);

/// One streaming step. Indices are 1-based stream positions.
struct Decision
{
    std::uint64_t index = 0;
    double alpha = 0.0;
    double p = 0.0;
    bool rejected = false;

    friend bool operator==(const Decision&, const Decision&) = default;
};

/// LORD: alpha_i = lambda_{i - t}, t the most recent rejection (0 if none).
struct LordState
{
    std::uint64_t next_index = 1;
    std::uint64_t last_discovery = 0;
};

/// LOND: alpha_i = min(1, lambda_i * (D + 1)), D the discoveries so far.
struct LondState
{
    std::uint64_t next_index = 1;
    std::uint64_t discoveries = 0;
};

/// Anything that yields lambda_i for i >= 1.
template <class S>
concept BudgetSequence = requires(const S& s, std::uint64_t i) {
    { s.lambda_at(i) } -> std::convertible_to<double>;
};

namespace detail {
void throw_bad_pvalue(double p);
}

inline void check_pvalue(double p)
{
    if (!(p >= 0.0 && p <= 1.0))
        detail::throw_bad_pvalue(p);
}

/// Both steps throw std::domain_error if p is NaN or outside [0, 1];
/// the state is left untouched in that case.
template <BudgetSequence Schedule>
Decision lord_step(LordState& state, const Schedule& schedule, double p)
{
    check_pvalue(p);
    const std::uint64_t i = state.next_index;
    const double alpha = schedule.lambda_at(i - state.last_discovery);
    const bool rejected = p <= alpha;
    if (rejected)
        state.last_discovery = i;
    ++state.next_index;
    return {i, alpha, p, rejected};
}

template <BudgetSequence Schedule>
Decision lond_step(LondState& state, const Schedule& schedule, double p)
{
    check_pvalue(p);
    const std::uint64_t i = state.next_index;
    const double alpha = std::min(1.0, schedule.lambda_at(i) * static_cast<double>(state.discoveries + 1));
    const bool rejected = p <= alpha;
    if (rejected)
        ++state.discoveries;
    ++state.next_index;
    return {i, alpha, p, rejected};
}

/// A single online stream for either sequential rule. Owns its schedule and
/// state; one caller at a time.
class OnlineTester
{
public:
    /// Throws std::invalid_argument for Procedure::BH, which is not online.
    OnlineTester(Procedure procedure, LambdaSchedule schedule);

    Decision step(double p);

    Procedure procedure() const noexcept { return procedure_; }
    const LambdaSchedule& schedule() const noexcept { return schedule_; }
    std::uint64_t steps() const noexcept { return steps_; }
    std::uint64_t discoveries() const noexcept { return discoveries_; }

private:
    Procedure procedure_;
    LambdaSchedule schedule_;
    LordState lord_;
    LondState lond_;
    std::uint64_t steps_ = 0;
    std::uint64_t discoveries_ = 0;
};

/// Folds the procedure's step over `pvalues` from a fresh state.
/// Throws std::invalid_argument for Procedure::BH.
template <BudgetSequence Schedule>
std::vector<Decision> run_stream(Procedure procedure, const Schedule& schedule, std::span<const double> pvalues)
{
    if (procedure == Procedure::BH)
        throw std::invalid_argument("run_stream: BH is not an online procedure");
    std::vector<Decision> out;
    out.reserve(pvalues.size());
    LordState lord;
    LondState lond;
    for (double p : pvalues)
        out.push_back(procedure == Procedure::Lord ? lord_step(lord, schedule, p) : lond_step(lond, schedule, p));
    return out;
}

/// Benjamini-Hochberg step-up at level q. Returns the sorted 1-based indices
/// of rejected hypotheses; every P-value equal to the cutoff is rejected.
/// Throws std::domain_error for q outside (0, 1) or a P-value outside [0, 1].
std::vector<std::uint64_t> bh_reject(std::span<const double> pvalues, double q);

/// Same rule as bh_reject, reported as a per-position flag.
std::vector<bool> bh_reject_mask(std::span<const double> pvalues, double q);

/// The BH cutoff: largest p_(k) with p_(k) <= q k / n, or -1 if none.
double bh_threshold(std::span<const double> pvalues, double q);

} // namespace seqfdr

#endif // SEQFDR_ENGINES_HPP
