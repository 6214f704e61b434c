#include "bessel/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "bessel/rng.hpp"

namespace bessel {

McEstimate mc_from_samples(const std::vector<double>& vals, std::uint64_t seed) {
    if (vals.empty()) throw std::invalid_argument("mc_from_samples: empty sample");
    long double s = 0.0L;
    for (double v : vals) s += v;
    const double mean = static_cast<double>(s / vals.size());
    long double q = 0.0L;
    for (double v : vals) {
        const long double d = v - mean;
        q += d * d;
    }
    McEstimate e;
    e.mean = mean;
    e.n = vals.size();
    e.seed = seed;
    e.std_error = vals.size() > 1
                      ? std::sqrt(static_cast<double>(q / (vals.size() - 1))) / std::sqrt(double(vals.size()))
                      : 0.0;
    return e;
}

McEstimate mc_median_of_means(const std::vector<double>& vals, int blocks, std::uint64_t seed) {
    if (blocks < 3) throw std::invalid_argument("mc_median_of_means: need at least 3 blocks");
    const std::size_t block_size = vals.size() / blocks;
    if (block_size == 0) throw std::invalid_argument("mc_median_of_means: sample smaller than block count");

    std::vector<double> block_means(blocks);
    for (int b = 0; b < blocks; ++b) {
        long double s = 0.0L;
        for (std::size_t i = b * block_size; i < (b + 1) * block_size; ++i) s += vals[i];
        block_means[b] = static_cast<double>(s / block_size);
    }
    McEstimate base = mc_from_samples(block_means, seed);
    McEstimate e;
    e.mean = sample_median(block_means);
    // 1.2533 = sqrt(pi/2), the large-sample penalty of a median vs a mean.
    e.std_error = 1.2533 * base.std_error;
    e.n = block_size * blocks;
    e.seed = seed;
    return e;
}

double sample_median(std::vector<double> v) {
    if (v.empty()) throw std::invalid_argument("sample_median: empty sample");
    const std::size_t mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + mid, v.end());
    double hi = v[mid];
    if (v.size() % 2 == 1) return hi;
    std::nth_element(v.begin(), v.begin() + mid - 1, v.begin() + mid);
    return 0.5 * (hi + v[mid - 1]);
}

KsResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
    if (a.empty() || b.empty()) throw std::invalid_argument("ks_two_sample: empty sample");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    KsResult r;
    r.n1 = a.size();
    r.n2 = b.size();
    std::size_t i = 0, j = 0;
    double d = 0.0;
    // consume every copy of the current value from both samples before taking
    // the CDF gap, otherwise ties (for example censored times sitting exactly
    // on a shared horizon) inflate the statistic
    while (i < a.size() && j < b.size()) {
        const double v = std::min(a[i], b[j]);
        while (i < a.size() && a[i] == v) ++i;
        while (j < b.size() && b[j] == v) ++j;
        d = std::max(d, std::abs(double(i) / a.size() - double(j) / b.size()));
    }
    r.statistic = d;
    r.critical_1pct =
        k_ks_coeff_1pct * std::sqrt(double(a.size() + b.size()) / (double(a.size()) * double(b.size())));
    return r;
}

KsResult ks_one_sample(std::vector<double> a, const std::function<double(double)>& cdf) {
    if (a.empty()) throw std::invalid_argument("ks_one_sample: empty sample");
    std::sort(a.begin(), a.end());
    KsResult r;
    r.n1 = a.size();
    r.n2 = 0;
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double c = cdf(a[i]);
        d = std::max(d, std::abs(double(i + 1) / a.size() - c));
        d = std::max(d, std::abs(double(i) / a.size() - c));
    }
    r.statistic = d;
    r.critical_1pct = k_ks_coeff_1pct / std::sqrt(double(a.size()));
    return r;
}

HillResult hill_tail_index(const std::vector<double>& sample, double tail_fraction,
                           int bootstrap_rounds, std::uint64_t seed) {
    if (!(tail_fraction > 0.0) || !(tail_fraction < 1.0))
        throw std::invalid_argument("hill_tail_index: tail fraction must lie in (0,1)");
    HillResult h;
    std::vector<double> v(sample);
    std::sort(v.begin(), v.end(), std::greater<double>());
    const std::size_t k = static_cast<std::size_t>(v.size() * tail_fraction);
    h.exceedances = k;
    if (k < 100 || k + 1 > v.size()) {
        h.conclusive = false;
        return h;
    }
    const double x_k1 = v[k]; // (k+1)-th largest
    if (!(x_k1 > 0.0)) {
        h.conclusive = false;
        return h;
    }
    std::vector<double> log_excess(k);
    long double s = 0.0L;
    for (std::size_t i = 0; i < k; ++i) {
        log_excess[i] = std::log(v[i] / x_k1);
        s += log_excess[i];
    }
    h.estimate = double(k) / static_cast<double>(s); // tail index = 1 / mean(log excess)
    h.conclusive = true;

    Xoshiro256pp rng = make_stream_rng(seed, 0x48494c4cull);
    std::vector<double> boot(bootstrap_rounds);
    for (int b = 0; b < bootstrap_rounds; ++b) {
        long double bs = 0.0L;
        for (std::size_t i = 0; i < k; ++i) bs += log_excess[rng() % k];
        boot[b] = double(k) / static_cast<double>(bs);
    }
    std::sort(boot.begin(), boot.end());
    h.ci_lo = boot[static_cast<std::size_t>(0.025 * (bootstrap_rounds - 1))];
    h.ci_hi = boot[static_cast<std::size_t>(0.975 * (bootstrap_rounds - 1))];
    return h;
}

double linreg_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size() || xs.size() < 2)
        throw std::invalid_argument("linreg_slope: need matching samples of size >= 2");
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= xs.size();
    my /= ys.size();
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxy += (xs[i] - mx) * (ys[i] - my);
        sxx += (xs[i] - mx) * (xs[i] - mx);
    }
    return sxy / sxx;
}

} // namespace bessel
