#include "seqfdr/metrics.hpp"

#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

using namespace seqfdr;

namespace {

std::vector<Decision> decisions_rejecting(std::uint64_t n, std::initializer_list<std::uint64_t> rejected)
{
    std::vector<Decision> d(n);
    for (std::uint64_t i = 0; i < n; ++i)
        d[i] = {i + 1, 0.05, 0.5, false};
    for (auto i : rejected)
        d[i - 1].rejected = true;
    return d;
}

} // namespace

TEST_CASE("TruthLabels")
{
    const TruthLabels t(5, {4, 2});
    CHECK(t.n() == 5);
    CHECK(t.signal_count() == 2);
    CHECK(t.signals()[0] == 2);
    CHECK(t.is_signal(4));
    CHECK_FALSE(t.is_signal(1));
    CHECK_FALSE(t.is_signal(0));
    CHECK_FALSE(t.is_signal(6));
    CHECK_THROWS_AS(TruthLabels(5, {6}), std::invalid_argument);
    CHECK_THROWS_AS(TruthLabels(5, {0}), std::invalid_argument);
    CHECK_THROWS_AS(TruthLabels(5, {2, 2}), std::invalid_argument);
}

TEST_CASE("fdp")
{
    CHECK(fdp(decisions_rejecting(5, {}), TruthLabels(5, {2, 3})) == 0.0);
    CHECK(fdp(decisions_rejecting(5, {1, 2}), TruthLabels(5, {2, 3})) == 0.5);
    CHECK(fdp(decisions_rejecting(5, {1, 2, 3}), TruthLabels(5, {})) == 1.0);
    CHECK_THROWS_AS(fdp(decisions_rejecting(4, {1}), TruthLabels(5, {})), std::invalid_argument);

    auto shuffled = decisions_rejecting(3, {1});
    std::swap(shuffled[0], shuffled[1]);
    CHECK_THROWS_AS(fdp(shuffled, TruthLabels(3, {})), std::invalid_argument);
}

TEST_CASE("fnp")
{
    CHECK(fnp(decisions_rejecting(5, {1}), TruthLabels(5, {})) == 0.0);
    CHECK(fnp(decisions_rejecting(5, {}), TruthLabels(5, {4, 5})) == 1.0);
    CHECK(fnp(decisions_rejecting(5, {4}), TruthLabels(5, {4, 5})) == 0.5);
    CHECK_THROWS_AS(fnp(decisions_rejecting(6, {}), TruthLabels(5, {})), std::invalid_argument);
}

TEST_CASE("pool")
{
    CHECK_THROWS_AS(pool(std::vector<MetricsRecord>{}), std::invalid_argument);

    const MetricsRecord one{100, 0.2, 0.3, 7, 0};
    const auto single = pool(std::vector{one});
    CHECK(single.fdr == 0.2);
    CHECK(single.fnr == 0.3);
    CHECK(single.fdr_se == 0.0);
    CHECK(single.fnr_se == 0.0);
    CHECK(single.risk == doctest::Approx(0.5));
    CHECK(single.mean_rejections == 7.0);
    CHECK(single.reps == 1);

    const auto two = pool(std::vector<MetricsRecord>{{10, 0.0, 0.0, 1, 0}, {10, 1.0, 0.0, 1, 1}});
    CHECK(two.fdr == 0.5);
    CHECK(two.fdr_se == doctest::Approx(0.5).epsilon(1e-15));

    CHECK_THROWS_AS(pool(std::vector<MetricsRecord>{{10, 0, 0, 0, 0}, {20, 0, 0, 0, 1}}), std::invalid_argument);
}

TEST_CASE("pooling is order independent")
{
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u;
    std::vector<MetricsRecord> recs(50);
    for (std::uint64_t k = 0; k < recs.size(); ++k)
        recs[k] = {100, u(rng), u(rng), k, k};
    const auto a = pool(recs);
    std::shuffle(recs.begin(), recs.end(), rng);
    const auto b = pool(recs);
    CHECK(a.fdr == doctest::Approx(b.fdr).epsilon(1e-14));
    CHECK(a.fnr_se == doctest::Approx(b.fnr_se).epsilon(1e-12));
}

TEST_CASE("degenerate procedures")
{
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 50; ++trial)
    {
        const std::uint64_t n = std::uniform_int_distribution<std::uint64_t>(2, 300)(rng);
        std::vector<std::uint64_t> idx(n);
        std::iota(idx.begin(), idx.end(), 1);
        std::shuffle(idx.begin(), idx.end(), rng);
        const std::uint64_t m = std::uniform_int_distribution<std::uint64_t>(1, n - 1)(rng);
        idx.resize(m);
        const TruthLabels truth(n, idx);

        const auto never = evaluate(std::vector<bool>(n, false), truth, n);
        CHECK(never.fdp == 0.0);
        CHECK(never.fnp == 1.0);
        CHECK(never.fdp + never.fnp == 1.0);

        const auto always = evaluate(std::vector<bool>(n, true), truth, n);
        CHECK(always.fnp == 0.0);
        CHECK(always.fdp == doctest::Approx(1.0 - double(m) / double(n)));
        CHECK(always.rejections == n);
    }
}

TEST_CASE("counting identity and bounds")
{
    std::mt19937_64 rng(5);
    std::bernoulli_distribution coin(0.3);
    for (int trial = 0; trial < 100; ++trial)
    {
        const std::uint64_t n = 200;
        std::vector<std::uint64_t> sig;
        std::vector<bool> rej(n);
        for (std::uint64_t i = 1; i <= n; ++i)
        {
            if (coin(rng))
                sig.push_back(i);
            rej[i - 1] = coin(rng);
        }
        const TruthLabels truth(n, sig);
        const auto rec = evaluate(rej, truth, n);
        std::uint64_t tp = 0, fp = 0;
        for (std::uint64_t i = 1; i <= n; ++i)
        {
            tp += rej[i - 1] && truth.is_signal(i);
            fp += rej[i - 1] && !truth.is_signal(i);
        }
        CHECK(rec.rejections == tp + fp);
        CHECK(rec.fdp >= 0.0);
        CHECK(rec.fdp <= 1.0);
        CHECK(rec.fnp >= 0.0);
        CHECK(rec.fnp <= 1.0);
        if (rec.rejections > 0)
            CHECK(rec.fdp == doctest::Approx(double(fp) / double(rec.rejections)));
    }
}

TEST_CASE("horizon grid and path")
{
    CHECK(horizon_grid(100) == std::vector<std::uint64_t>{13, 25, 50, 100});
    CHECK(horizon_grid(5000) == std::vector<std::uint64_t>{10, 20, 40, 79, 157, 313, 625, 1250, 2500, 5000});
    CHECK(horizon_grid(7) == std::vector<std::uint64_t>{7});
    CHECK(horizon_grid(10) == std::vector<std::uint64_t>{10});

    const TruthLabels truth(6, {2, 5});
    const std::vector<bool> rej{true, true, false, false, false, true};
    const std::uint64_t hs[] = {1, 2, 4, 6};
    const auto path = evaluate_path(rej, truth, hs, 9);
    REQUIRE(path.size() == 4);
    CHECK(path[0].fdp == 1.0);
    CHECK(path[0].fnp == 0.0);
    CHECK(path[1].fdp == 0.5);
    CHECK(path[1].fnp == 0.0);
    CHECK(path[2].rejections == 2);
    CHECK(path[3].fdp == doctest::Approx(2.0 / 3.0));
    CHECK(path[3].fnp == 0.5);
    CHECK(path[3].replicate == 9);
    CHECK(path[3].n_eval == 6);

    const std::uint64_t bad[] = {4, 2};
    CHECK_THROWS_AS(evaluate_path(rej, truth, bad), std::invalid_argument);
    const std::uint64_t beyond[] = {7};
    CHECK_THROWS_AS(evaluate_path(rej, truth, beyond), std::invalid_argument);
}
