#ifndef SEQFDR_DISTRIBUTIONS_HPP
#define SEQFDR_DISTRIBUTIONS_HPP

#include <random>
#include <span>

namespace seqfdr {

using Rng = std::mt19937_64;

/// Generalized Gaussian kernel with density proportional to
/// exp(-|x/scale|^gamma / gamma). gamma = 2 is the standard normal,
/// gamma = 1 the unit Laplace law. Immutable once constructed.
class GGKernel
{
public:
    /// Throws std::invalid_argument unless gamma >= 1 and scale > 0 (both finite).
    explicit GGKernel(double gamma = 2.0, double scale = 1.0);

    double gamma() const noexcept { return gamma_; }
    double scale() const noexcept { return scale_; }

    static GGKernel normal() { return GGKernel(2.0, 1.0); }
    /// Laplace law rescaled to unit variance.
    static GGKernel unit_variance_laplace();

private:
    double gamma_;
    double scale_;
};

/// P(X >= x). Throws std::domain_error for non-finite x.
double gg_survival(const GGKernel& kernel, double x);

/// Inverse survival: the x with gg_survival(kernel, x) == p.
/// Throws std::domain_error unless 0 < p < 1.
double gg_quantile(const GGKernel& kernel, double p);

/// One draw from the kernel's law.
double gg_sample(const GGKernel& kernel, Rng& rng);

/// Fills `out` with independent draws. Same law as gg_sample but not the
/// same sequence: distribution objects are reused across draws.
void gg_fill(const GGKernel& kernel, Rng& rng, std::span<double> out);

/// Right-tail P-value of an observed statistic under the null kernel.
inline double pvalue(const GGKernel& kernel, double x) { return gg_survival(kernel, x); }

/// CDF of the P-value of a statistic shifted by mu:
/// F(t) = Phi(mu - Phi^{-1}(1 - t)).
struct AltPValueCDF
{
    GGKernel kernel;
    double mu = 0.0;
};

/// F(t). Throws std::domain_error unless t is in [0, 1].
double alt_pvalue_cdf(const AltPValueCDF& alt, double t);

/// Mixture P-value CDF G(t) = (1 - epsilon) t + epsilon F(t).
double mixture_pvalue_cdf(const AltPValueCDF& alt, double epsilon, double t);

} // namespace seqfdr

#endif // SEQFDR_DISTRIBUTIONS_HPP
