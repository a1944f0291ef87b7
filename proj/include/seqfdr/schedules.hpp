#ifndef SEQFDR_SCHEDULES_HPP
#define SEQFDR_SCHEDULES_HPP

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace seqfdr {

enum class ScheduleKind
{
    Power,       ///< lambda_i = L * i^-nu
    AdaptiveLog, ///< lambda_i = L / ((i + 1) * log(i + 1)^2)
};

/// Non-increasing significance budget (lambda_i), i >= 1, whose infinite sum
/// equals q. Immutable and cheap to copy; the cached prefix is shared.
class LambdaSchedule
{
public:
    /// Number of leading values held in the shared cache.
    static constexpr std::uint64_t kCacheSize = std::uint64_t{1} << 20;

    ScheduleKind kind() const noexcept { return kind_; }
    /// Exponent for the power kind; 0 for the adaptive kind.
    double nu() const noexcept { return nu_; }
    double q() const noexcept { return q_; }
    double normalizer() const noexcept { return normalizer_; }

    /// lambda_i. Throws std::domain_error for i == 0.
    double lambda_at(std::uint64_t i) const
    {
        if (i == 0)
            throw std::domain_error("lambda_at: index must be >= 1");
        if (i <= cache_->size())
            return (*cache_)[i - 1];
        return evaluate(i);
    }

    /// Analytic bounds on the tail sum over i > n.
    double tail_lower(std::uint64_t n) const;
    double tail_upper(std::uint64_t n) const;

    std::string describe() const;

    friend LambdaSchedule make_power_schedule(double nu, double q);
    friend LambdaSchedule make_adaptive_schedule(double q);

private:
    LambdaSchedule(ScheduleKind kind, double nu, double q, double normalizer);

    double evaluate(std::uint64_t i) const;

    ScheduleKind kind_;
    double nu_;
    double q_;
    double normalizer_;
    std::shared_ptr<const std::vector<double>> cache_;
};

/// lambda_i proportional to i^-nu. Throws std::domain_error if nu <= 1
/// (divergent series) or q is not a finite positive mass.
LambdaSchedule make_power_schedule(double nu, double q);

/// lambda_i proportional to 1 / ((i + 1) log^2(i + 1)): summable, yet
/// i^nu lambda_i grows without bound for every nu > 1.
LambdaSchedule make_adaptive_schedule(double q);

/// zeta(nu) for nu > 1.
double riemann_zeta(double nu);

/// Sum over k >= 2 of 1 / (k log^2 k).
double inverse_log_square_series();

} // namespace seqfdr

#endif // SEQFDR_SCHEDULES_HPP
