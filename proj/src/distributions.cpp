#include "seqfdr/distributions.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <stdexcept>
#include <string>

namespace seqfdr {

namespace {

constexpr int kQuantileMaxIterations = 200;
constexpr double kQuantileBracketWidth = 1e-14;

// Survival of the unit-scale law at z >= 0.
double upper_tail(double gamma, double z)
{
    if (z == 0.0)
        return 0.5;
    if (gamma == 1.0)
        return 0.5 * std::exp(-z);
    if (gamma == 2.0)
        return 0.5 * std::erfc(z * M_SQRT1_2);
    // |X|^gamma / gamma ~ Gamma(1/gamma, 1)
    return 0.5 * boost::math::gamma_q(1.0 / gamma, std::pow(z, gamma) / gamma);
}

double unit_survival(double gamma, double z)
{
    return z >= 0.0 ? upper_tail(gamma, z) : 1.0 - upper_tail(gamma, -z);
}

// Positive root of upper_tail(gamma, z) == p for p in (0, 1/2).
double upper_tail_root(double gamma, double p)
{
    double lo = 0.0;
    double hi = 1.0;
    while (upper_tail(gamma, hi) > p && hi < 0x1p20)
        hi *= 2.0;

    for (int it = 0; it < kQuantileMaxIterations && hi - lo > kQuantileBracketWidth; ++it)
    {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi)
            break;
        if (upper_tail(gamma, mid) > p)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace

GGKernel::GGKernel(double gamma, double scale)
    : gamma_(gamma), scale_(scale)
{
    if (!std::isfinite(gamma) || gamma < 1.0)
        throw std::invalid_argument("GGKernel: gamma must be finite and >= 1, got " + std::to_string(gamma));
    if (!std::isfinite(scale) || scale <= 0.0)
        throw std::invalid_argument("GGKernel: scale must be finite and > 0, got " + std::to_string(scale));
}

GGKernel GGKernel::unit_variance_laplace()
{
    return GGKernel(1.0, M_SQRT1_2);
}

double gg_survival(const GGKernel& kernel, double x)
{
    if (!std::isfinite(x))
        throw std::domain_error("gg_survival: non-finite argument");
    return unit_survival(kernel.gamma(), x / kernel.scale());
}

double gg_quantile(const GGKernel& kernel, double p)
{
    if (!(p > 0.0 && p < 1.0))
        throw std::domain_error("gg_quantile: probability must lie in (0, 1), got " + std::to_string(p));
    if (p == 0.5)
        return 0.0;
    // 1 - p is exact for p >= 1/2
    const double z = p < 0.5 ? upper_tail_root(kernel.gamma(), p) : -upper_tail_root(kernel.gamma(), 1.0 - p);
    return kernel.scale() * z;
}

double gg_sample(const GGKernel& kernel, Rng& rng)
{
    const double gamma = kernel.gamma();
    if (gamma == 2.0)
        return kernel.scale() * std::normal_distribution<double>{}(rng);

    const double sign = std::bernoulli_distribution{}(rng) ? 1.0 : -1.0;
    double magnitude;
    if (gamma == 1.0)
        magnitude = std::exponential_distribution<double>{}(rng);
    else
        magnitude = std::pow(gamma * std::gamma_distribution<double>(1.0 / gamma, 1.0)(rng), 1.0 / gamma);
    return kernel.scale() * sign * magnitude;
}

void gg_fill(const GGKernel& kernel, Rng& rng, std::span<double> out)
{
    const double gamma = kernel.gamma();
    const double scale = kernel.scale();
    if (gamma == 2.0)
    {
        std::normal_distribution<double> normal(0.0, scale);
        for (double& x : out)
            x = normal(rng);
        return;
    }

    std::bernoulli_distribution coin;
    if (gamma == 1.0)
    {
        std::exponential_distribution<double> exponential(1.0 / scale);
        for (double& x : out)
            x = coin(rng) ? exponential(rng) : -exponential(rng);
        return;
    }

    std::gamma_distribution<double> magnitude(1.0 / gamma, 1.0);
    for (double& x : out)
    {
        const double sign = coin(rng) ? scale : -scale;
        x = sign * std::pow(gamma * magnitude(rng), 1.0 / gamma);
    }
}

double alt_pvalue_cdf(const AltPValueCDF& alt, double t)
{
    if (!(t >= 0.0 && t <= 1.0))
        throw std::domain_error("alt_pvalue_cdf: t must lie in [0, 1]");
    if (t == 0.0)
        return 0.0;
    if (t == 1.0)
        return 1.0;
    // Phi(mu - xi) == Phibar(xi - mu) by symmetry
    const double xi = gg_quantile(alt.kernel, t);
    return gg_survival(alt.kernel, xi - alt.mu);
}

double mixture_pvalue_cdf(const AltPValueCDF& alt, double epsilon, double t)
{
    if (!(epsilon >= 0.0 && epsilon <= 1.0))
        throw std::domain_error("mixture_pvalue_cdf: epsilon must lie in [0, 1]");
    return (1.0 - epsilon) * t + epsilon * alt_pvalue_cdf(alt, t);
}

} // namespace seqfdr
