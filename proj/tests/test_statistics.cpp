#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "bessel/parallel.hpp"
#include "bessel/rng.hpp"
#include "bessel/statistics.hpp"

using namespace bessel;

TEST_CASE("sample mean and standard error") {
    const McEstimate est = mc_from_samples({1.0, 2.0, 3.0, 4.0}, 9);
    CHECK(est.mean == doctest::Approx(2.5).epsilon(1e-15));
    // unbiased variance 5/3, se = sqrt(5/3/4)
    CHECK(est.std_error == doctest::Approx(std::sqrt(5.0 / 12.0)).epsilon(1e-15));
    CHECK(est.n == 4);
    CHECK(est.seed == 9);
}

TEST_CASE("median of means degenerates gracefully") {
    const std::vector<double> constant(310, 4.25);
    const McEstimate est = mc_median_of_means(constant, 31, 1);
    CHECK(est.mean == doctest::Approx(4.25).epsilon(1e-15));
    CHECK(est.std_error == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("median of means resists one wild block") {
    // 99 zeros, one enormous value: plain mean is dragged, the block median is not
    std::vector<double> v(100, 0.0);
    v[57] = 1e12;
    const McEstimate plain = mc_from_samples(v, 2);
    const McEstimate robust = mc_median_of_means(v, 10, 2);
    CHECK(plain.mean == doctest::Approx(1e10).epsilon(1e-12));
    CHECK(std::abs(robust.mean) < 1.0);
}

TEST_CASE("sample median") {
    CHECK(sample_median({3.0, 1.0, 2.0}) == doctest::Approx(2.0));
    CHECK(sample_median({4.0, 1.0, 3.0, 2.0}) == doctest::Approx(2.5));
}

TEST_CASE("two-sample KS statistic on hand-computable inputs") {
    const KsResult same = ks_two_sample({1.0, 2.0, 3.0}, {1.0, 2.0, 3.0});
    CHECK(same.statistic == doctest::Approx(0.0).epsilon(1e-15));
    const KsResult tiny = ks_two_sample({1.0, 2.0}, {10.0, 11.0});
    CHECK(tiny.statistic == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(tiny.critical_1pct ==
          doctest::Approx(k_ks_coeff_1pct * std::sqrt((2.0 + 2.0) / (2.0 * 2.0))).epsilon(1e-12));

    // with samples this small the 1% critical value exceeds 1, so the gate
    // only has power once the samples grow
    std::vector<double> lo(100), hi(100);
    for (int i = 0; i < 100; ++i) {
        lo[i] = i;
        hi[i] = 1000 + i;
    }
    const KsResult disjoint = ks_two_sample(lo, hi);
    CHECK(disjoint.statistic == doctest::Approx(1.0).epsilon(1e-15));
    CHECK_FALSE(disjoint.pass_1pct());
}

TEST_CASE("one-sample KS against the uniform law") {
    const KsResult ks =
        ks_one_sample({0.25, 0.5, 0.75}, [](double x) { return std::min(std::max(x, 0.0), 1.0); });
    CHECK(ks.statistic == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("two-sample KS accepts two draws of the same law") {
    const auto sampler = [](std::uint64_t seed) {
        return mc_samples(4000, seed, 0, [](std::size_t, Xoshiro256pp& rng) {
            std::normal_distribution<double> g(0.0, 1.0);
            return g(rng);
        });
    };
    const KsResult ks = ks_two_sample(sampler(101), sampler(202));
    CHECK(ks.pass_1pct());
}

TEST_CASE("Hill estimator recovers a synthetic Pareto index") {
    // X = U^(-1/alpha) has survival x^(-alpha); alpha = 2
    const std::vector<double> xs = mc_samples(20000, 77, 0, [](std::size_t, Xoshiro256pp& rng) {
        std::uniform_real_distribution<double> u(0.0, 1.0);
        return std::pow(1.0 - u(rng), -0.5);
    });
    const HillResult h = hill_tail_index(xs, 0.05, 400, 99);
    CHECK(h.conclusive);
    CHECK(h.exceedances == 1000);
    CHECK(h.ci_lo < 2.0);
    CHECK(h.ci_hi > 2.0);
    CHECK(h.estimate == doctest::Approx(2.0).epsilon(0.15));
}

TEST_CASE("Hill estimator refuses tiny tails") {
    const std::vector<double> xs(500, 1.0);
    CHECK_FALSE(hill_tail_index(xs, 0.01, 50, 1).conclusive);
}

TEST_CASE("least-squares slope is exact on a line") {
    CHECK(linreg_slope({1.0, 2.0, 3.0, 4.0}, {4.0, 7.0, 10.0, 13.0}) ==
          doctest::Approx(3.0).epsilon(1e-13));
}
