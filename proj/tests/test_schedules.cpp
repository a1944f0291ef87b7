#include "seqfdr/schedules.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace seqfdr;

namespace {

constexpr std::uint64_t kOracleTerms = 10000000;

// Compensated partial sum of lambda_1..lambda_N straight from the schedule.
double partial_sum(const LambdaSchedule& s, std::uint64_t n)
{
    double sum = 0.0, carry = 0.0;
    for (std::uint64_t i = n; i >= 1; --i)
    {
        const double y = s.lambda_at(i) - carry;
        const double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
    return sum;
}

} // namespace

TEST_CASE("power schedule with zeta(2) mass has unit normalizer")
{
    const double q = std::numbers::pi * std::numbers::pi / 6.0;
    const auto s = make_power_schedule(2.0, q);
    CHECK(s.normalizer() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(s.lambda_at(1) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(s.lambda_at(3) == doctest::Approx(1.0 / 9.0).epsilon(1e-14));
    CHECK(s.kind() == ScheduleKind::Power);
}

TEST_CASE("power schedule nu = 2, q = 0.1")
{
    const auto s = make_power_schedule(2.0, 0.1);
    CHECK(s.lambda_at(1) == doctest::Approx(0.1 * 6.0 / (std::numbers::pi * std::numbers::pi)).epsilon(1e-14));
    CHECK(s.lambda_at(1) == doctest::Approx(0.0607927101854027).epsilon(1e-13));
}

TEST_CASE("power schedule nu = 1.05 normalizer against the partial-sum oracle")
{
    const double nu = 1.05, q = 0.1;
    const auto s = make_power_schedule(nu, q);

    // zeta(1.05) bracketed by a 10^7-term sum plus integral tail bounds
    double head = 0.0, carry = 0.0;
    for (std::uint64_t k = kOracleTerms; k >= 1; --k)
    {
        const double y = std::pow(double(k), -nu) - carry;
        const double t = head + y;
        carry = (t - head) - y;
        head = t;
    }
    const double n = double(kOracleTerms);
    const double zeta_lo = head + std::pow(n + 1.0, 1.0 - nu) / (nu - 1.0);
    const double zeta_hi = head + std::pow(n, 1.0 - nu) / (nu - 1.0);
    CHECK(s.normalizer() >= q / zeta_hi * (1 - 1e-15));
    CHECK(s.normalizer() <= q / zeta_lo * (1 + 1e-15));
    CHECK(s.normalizer() == doctest::Approx(0.0048588871541145945).epsilon(1e-12));
    CHECK(s.lambda_at(1) == s.normalizer());
}

TEST_CASE("riemann_zeta")
{
    CHECK(riemann_zeta(2.0) == doctest::Approx(std::numbers::pi * std::numbers::pi / 6.0).epsilon(1e-15));
    CHECK(riemann_zeta(4.0) == doctest::Approx(std::pow(std::numbers::pi, 4) / 90.0).epsilon(1e-15));
    CHECK_THROWS_AS(riemann_zeta(1.0), std::domain_error);
}

TEST_CASE("budget conservation at N = 10^7")
{
    for (const auto& s : {make_power_schedule(1.05, 0.1), make_power_schedule(2.0, 0.05), make_adaptive_schedule(0.1)})
    {
        CAPTURE(s.describe());
        const double partial = partial_sum(s, kOracleTerms);
        CHECK(partial < s.q());
        const double lo = partial + s.tail_lower(kOracleTerms) - s.q();
        const double hi = partial + s.tail_upper(kOracleTerms) - s.q();
        CHECK(lo >= -1e-9);
        CHECK(lo <= 1e-15);
        CHECK(hi <= 1e-9);
        CHECK(hi >= -1e-15);
    }
}

TEST_CASE("adaptive schedule")
{
    const auto s = make_adaptive_schedule(0.1);
    CHECK(s.kind() == ScheduleKind::AdaptiveLog);

    for (std::uint64_t i = 1; i < 5000; ++i)
        CHECK(s.lambda_at(i + 1) < s.lambda_at(i));

    // i^nu lambda_i grows without bound for every nu > 1, but for nu near 1
    // the log^2 factor wins until i is astronomically large; nu = 1.5 shows
    // the growth inside the representable range.
    const double a = std::pow(1e2, 1.5) * s.lambda_at(100);
    const double b = std::pow(1e4, 1.5) * s.lambda_at(10000);
    const double c = std::pow(1e6, 1.5) * s.lambda_at(1000000);
    CHECK(a < b);
    CHECK(b < c);
    CHECK(inverse_log_square_series() == doctest::Approx(s.q() / s.normalizer()));
}

TEST_CASE("lambda_at")
{
    const auto s = make_power_schedule(1.05, 0.1);
    CHECK_THROWS_AS(s.lambda_at(0), std::domain_error);
    CHECK(s.lambda_at(17) == s.lambda_at(17));
    CHECK(s.lambda_at(17) == s.normalizer() * std::pow(17.0, -1.05));

    const LambdaSchedule copy = s;
    CHECK(copy.lambda_at(123456) == s.lambda_at(123456));

    // sweep across the cached prefix into the on-demand range
    for (const auto& sched : {s, make_adaptive_schedule(0.2)})
    {
        double prev = sched.lambda_at(1);
        bool monotone = true;
        for (std::uint64_t i = 2; i <= LambdaSchedule::kCacheSize + 100000; ++i)
        {
            const double cur = sched.lambda_at(i);
            monotone = monotone && cur <= prev && cur > 0.0;
            prev = cur;
        }
        CHECK(monotone);
    }
    CHECK(s.lambda_at(50000000000ULL) > 0.0);
}

TEST_CASE("schedule argument validation")
{
    CHECK_THROWS_AS(make_power_schedule(1.0, 0.1), std::domain_error);
    CHECK_THROWS_AS(make_power_schedule(0.5, 0.1), std::domain_error);
    CHECK_THROWS_AS(make_power_schedule(2.0, 0.0), std::domain_error);
    CHECK_THROWS_AS(make_power_schedule(2.0, -0.1), std::domain_error);
    CHECK_THROWS_AS(make_power_schedule(2.0, NAN), std::domain_error);
    CHECK_THROWS_AS(make_adaptive_schedule(0.0), std::domain_error);
}

TEST_CASE("inverse-log levels give valid schedules")
{
    for (double n : {3.0, 10.0, 1e4, 1e6, 1e9})
    {
        const double q = 1.0 / std::log(n);
        CAPTURE(n);
        REQUIRE(q > 0.0);
        REQUIRE(q < 1.0);
        const auto s = make_power_schedule(1.05, q);
        CHECK(s.lambda_at(1) < q);
        CHECK(s.normalizer() * riemann_zeta(1.05) == doctest::Approx(q).epsilon(1e-14));
    }
}
