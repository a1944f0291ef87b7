#include "seqfdr/schedules.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace seqfdr {

namespace {

// Terms summed explicitly before the Euler-Maclaurin tail takes over. The
// first neglected correction is O(N^-(nu+7)), far below double precision.
constexpr std::uint64_t kExplicitTerms = 10000;

void require_mass(double q, const char* who)
{
    if (!std::isfinite(q) || q <= 0.0)
        throw std::domain_error(std::string(who) + ": q must be a finite positive budget");
}

// Summation from the smallest term upward, compensated.
template <class Term>
double compensated_sum_descending(std::uint64_t first, std::uint64_t last, Term term)
{
    double sum = 0.0;
    double carry = 0.0;
    for (std::uint64_t k = last; k >= first; --k)
    {
        const double y = term(k) - carry;
        const double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
    return sum;
}

double inv_log_square(double x)
{
    const double l = std::log(x);
    return 1.0 / (x * l * l);
}

} // namespace

double riemann_zeta(double nu)
{
    if (!(nu > 1.0) || !std::isfinite(nu))
        throw std::domain_error("riemann_zeta: series diverges for nu <= 1");

    const std::uint64_t n = kExplicitTerms;
    const double head = compensated_sum_descending(1, n - 1, [nu](std::uint64_t k) {
        return std::pow(static_cast<double>(k), -nu);
    });

    // Euler-Maclaurin for sum_{k >= N} k^-nu
    const double x = static_cast<double>(n);
    const double f = std::pow(x, -nu);
    const double d1 = -nu * f / x;
    const double d3 = d1 * (nu + 1.0) * (nu + 2.0) / (x * x);
    const double d5 = d3 * (nu + 3.0) * (nu + 4.0) / (x * x);
    const double tail = x * f / (nu - 1.0) + 0.5 * f - d1 / 12.0 + d3 / 720.0 - d5 / 30240.0;
    return head + tail;
}

double inverse_log_square_series()
{
    const std::uint64_t n = kExplicitTerms;
    const double head = compensated_sum_descending(2, n - 1, [](std::uint64_t k) {
        return inv_log_square(static_cast<double>(k));
    });

    const double x = static_cast<double>(n);
    const double l = std::log(x);
    const double l2 = l * l;
    const double d1 = -(l + 2.0) / (x * x * l2 * l);
    const double d3 = -2.0 * (((3.0 * l + 11.0) * l + 18.0) * l + 12.0) / (x * x * x * x * l2 * l2 * l);
    const double tail = 1.0 / l + 0.5 * inv_log_square(x) - d1 / 12.0 + d3 / 720.0;
    return head + tail;
}

LambdaSchedule::LambdaSchedule(ScheduleKind kind, double nu, double q, double normalizer)
    : kind_(kind), nu_(nu), q_(q), normalizer_(normalizer)
{
    auto values = std::make_shared<std::vector<double>>(kCacheSize);
    for (std::uint64_t i = 1; i <= kCacheSize; ++i)
        (*values)[i - 1] = evaluate(i);
    cache_ = std::move(values);
}

double LambdaSchedule::evaluate(std::uint64_t i) const
{
    const double x = static_cast<double>(i);
    switch (kind_)
    {
    case ScheduleKind::Power:
        return normalizer_ * std::pow(x, -nu_);
    case ScheduleKind::AdaptiveLog:
        return normalizer_ * inv_log_square(x + 1.0);
    }
    return 0.0;
}

double LambdaSchedule::tail_lower(std::uint64_t n) const
{
    const double x = static_cast<double>(n);
    if (kind_ == ScheduleKind::Power)
        return normalizer_ * std::pow(x + 1.0, 1.0 - nu_) / (nu_ - 1.0);
    return normalizer_ / std::log(x + 2.0);
}

double LambdaSchedule::tail_upper(std::uint64_t n) const
{
    const double x = static_cast<double>(n);
    if (kind_ == ScheduleKind::Power)
        return normalizer_ * std::pow(x, 1.0 - nu_) / (nu_ - 1.0);
    return normalizer_ / std::log(x + 1.0);
}

std::string LambdaSchedule::describe() const
{
    std::ostringstream out;
    if (kind_ == ScheduleKind::Power)
        out << "power(nu=" << nu_ << ", q=" << q_ << ")";
    else
        out << "adaptive-log(q=" << q_ << ")";
    return out.str();
}

LambdaSchedule make_power_schedule(double nu, double q)
{
    if (!(nu > 1.0) || !std::isfinite(nu))
        throw std::domain_error("make_power_schedule: nu must exceed 1, the series diverges otherwise");
    require_mass(q, "make_power_schedule");
    return LambdaSchedule(ScheduleKind::Power, nu, q, q / riemann_zeta(nu));
}

LambdaSchedule make_adaptive_schedule(double q)
{
    require_mass(q, "make_adaptive_schedule");
    return LambdaSchedule(ScheduleKind::AdaptiveLog, 0.0, q, q / inverse_log_square_series());
}

} // namespace seqfdr
