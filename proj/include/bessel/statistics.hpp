#pragma once

#include <cstdint>
#include <functional>
#include <vector>

namespace bessel {

/** Monte-Carlo point estimate; reproducible given (seed, n, config). */
struct McEstimate {
    double mean = 0.0;
    double std_error = 0.0;   // sample std / sqrt(n), or the block-median analogue
    std::size_t n = 0;
    std::uint64_t seed = 0;
};

/** Plain sample mean with standard error. */
McEstimate mc_from_samples(const std::vector<double>& vals, std::uint64_t seed);

/**
 * Median-of-means over `blocks` equal blocks (remainder samples dropped);
 * the reported std_error is 1.2533 * std(block means) / sqrt(blocks), the
 * asymptotic efficiency factor of a median of near-Gaussian block means.
 * Used where the integrand is heavy-tailed and the plain mean is fragile.
 */
McEstimate mc_median_of_means(const std::vector<double>& vals, int blocks, std::uint64_t seed);

double sample_median(std::vector<double> v);

/** Asymptotic two-sided Kolmogorov-Smirnov threshold scale at the 1% level. */
inline constexpr double k_ks_coeff_1pct = 1.6276;

struct KsResult {
    double statistic = 0.0;
    double critical_1pct = 0.0;
    std::size_t n1 = 0, n2 = 0;
    bool pass_1pct() const { return statistic < critical_1pct; }
};

KsResult ks_two_sample(std::vector<double> a, std::vector<double> b);
KsResult ks_one_sample(std::vector<double> a, const std::function<double(double)>& cdf);

/**
 * Hill tail-index estimate from the top `tail_fraction` of the sample, with a
 * percentile bootstrap confidence interval over the log-excesses. Fewer than
 * 100 exceedances is reported as inconclusive rather than a verdict.
 */
struct HillResult {
    double estimate = 0.0;
    double ci_lo = 0.0;
    double ci_hi = 0.0;
    std::size_t exceedances = 0;
    bool conclusive = false;
};

HillResult hill_tail_index(const std::vector<double>& sample, double tail_fraction,
                           int bootstrap_rounds, std::uint64_t seed);

/** Least-squares slope of ys against xs. */
double linreg_slope(const std::vector<double>& xs, const std::vector<double>& ys);

} // namespace bessel
