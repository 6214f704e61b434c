#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "bessel/dimension.hpp"
#include "bessel/kernels.hpp"
#include "bessel/semigroup.hpp"
#include "bessel/test_functions.hpp"

using namespace bessel;

namespace {
SemigroupQuery query(double delta, double x, double T, const TestFunction& F) {
    QuadratureSettings qs;
    return SemigroupQuery{BesselDim::of(delta), T, x, F, qs};
}
TestFunction gaussian(double lambda) {
    TestFunction F;
    F.name = "exp_neg_lambda_y2";
    F.f = [lambda](double y) { return std::exp(-lambda * y * y); };
    F.sup_norm = 1.0;
    return F;
}
} // namespace

TEST_CASE("kernel application against frozen references") {
    // independent 40-digit evaluation of the same integral
    CHECK(apply_kernel(query(0.5, 1.0, 1.0, make_test_function("exp_neg_y2"))) ==
          doctest::Approx(0.544446059660669360041948968296).epsilon(1e-10));
    // dimension 0 includes the atom: value is atom + absolutely continuous part
    CHECK(apply_kernel(query(0.0, 1.0, 1.0, make_test_function("exp_neg_y2"))) ==
          doctest::Approx(0.716531310573789250425604096925).epsilon(1e-10));
}

TEST_CASE("kernel application agrees with the Laplace closed form") {
    for (double delta : {0.0, 0.5, 1.0, 2.0, 3.7})
        for (double lambda : {0.5, 2.0}) {
            const double got = apply_kernel(query(delta, 0.9, 0.8, gaussian(lambda)));
            CHECK(got == doctest::Approx(sq_bessel_laplace(delta, 0.8, 0.81, lambda))
                             .epsilon(1e-9));
        }
}

TEST_CASE("derivative agrees with the differentiated Laplace closed form") {
    // d/dx of exp(-lambda x^2 / (1+2 lambda T)) (1+2 lambda T)^(-delta/2)
    const double delta = 1.7, x = 0.9, T = 0.6, lambda = 1.0;
    const double expected = -2.0 * lambda * x / (1.0 + 2.0 * lambda * T) *
                            sq_bessel_laplace(delta, T, x * x, lambda);
    CHECK(derivative_semigroup(query(delta, x, T, gaussian(lambda))) ==
          doctest::Approx(expected).epsilon(1e-9));
}

TEST_CASE("derivative agrees with central differences") {
    const TestFunction F = make_test_function("cauchy");
    const double an = derivative_semigroup(query(2.5, 1.3, 0.7, F));
    const double fd = fd_derivative(query(2.5, 1.3, 0.7, F), 1e-4);
    CHECK(an == doctest::Approx(fd).epsilon(1e-7));
}

TEST_CASE("derivative vanishes exactly at the origin") {
    for (double delta : {0.0, 0.5, 1.0, 2.0, 3.0})
        CHECK(derivative_semigroup(query(delta, 0.0, 0.5, make_test_function("cauchy"))) == 0.0);
}

TEST_CASE("jump locations of indicator integrands are respected") {
    // the indicator mass equals the kernel CDF at the jump; cross-check via
    // complement so the same quadrature is exercised on both sides
    const TestFunction ind = make_test_function("indicator_0_a", 1.0);
    const double inside = apply_kernel(query(1.5, 0.7, 0.9, ind));
    TestFunction outside;
    outside.name = "indicator_complement";
    outside.f = [](double y) { return y > 1.0 ? 1.0 : 0.0; };
    outside.sup_norm = 1.0;
    outside.jumps = {1.0};
    const double comp = apply_kernel(query(1.5, 0.7, 0.9, outside));
    CHECK(inside + comp == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(inside > 0.0);
    CHECK(inside < 1.0);
}

TEST_CASE("kernels are monotone in the dimension for nondecreasing integrands") {
    TestFunction inc;
    inc.name = "tanh";
    inc.f = [](double y) { return std::tanh(y); };
    inc.sup_norm = 1.0;
    for (double delta : {0.3, 1.0, 2.0})
        for (double x : {0.0, 0.7, 1.5})
            for (double T : {0.5, 1.0}) {
                const double lo = apply_kernel(query(delta, x, T, inc));
                const double hi = apply_kernel(query(delta + 0.7, x, T, inc));
                CHECK(lo <= hi + 1e-9);
            }
}

TEST_CASE("second derivative bootstraps from the dual-kernel identity") {
    // applying the derivative identity twice:
    //   (P F)''(x) = (1/T)(Q F - P F)(x) + (x/T) ((x/T)(R F - Q F) - (x/T)(Q F - P F))
    // with Q, R the kernels two and four dimensions up; checked against both
    // the closed-form Gaussian integrand and a second central difference
    const double delta = 1.5, x = 1.0, T = 1.0, lambda = 1.0;
    const TestFunction F = gaussian(lambda);
    const auto P = [&](double dim, double at) { return apply_kernel(query(dim, at, T, F)); };

    const double p0 = P(delta, x), p2 = P(delta + 2.0, x), p4 = P(delta + 4.0, x);
    const double d1_up = (x / T) * (p4 - p2);
    const double d1 = (x / T) * (p2 - p0);
    const double second = (p2 - p0) / T + (x / T) * (d1_up - d1);

    // closed form: d^2/dx^2 of exp(-lambda x^2/(1+2 lambda T)) (1+2 lambda T)^(-delta/2)
    const double c = 2.0 * lambda / (1.0 + 2.0 * lambda * T);
    const double closed = (c * c * x * x - c) * sq_bessel_laplace(delta, T, x * x, lambda);
    CHECK(second == doctest::Approx(closed).epsilon(1e-6));

    const double h = 2e-3;
    const double fd2 = (P(delta, x + h) - 2.0 * p0 + P(delta, x - h)) / (h * h);
    CHECK(second == doctest::Approx(fd2).epsilon(1e-4));
}

TEST_CASE("squared-radius tail bound is monotone and certifies the cutoff") {
    const double delta = 3.0, T = 1.0, x = 1.0;
    double prev = squared_radius_tail_bound(delta, T, x, x + 4.0 * std::sqrt(T));
    for (double k : {6.0, 8.0, 12.0}) {
        const double cur = squared_radius_tail_bound(delta, T, x, x + k * std::sqrt(T));
        CHECK(cur < prev);
        prev = cur;
    }
    CHECK(squared_radius_tail_bound(delta, T, x, x + 12.0 * std::sqrt(T)) < 1e-10);
}

TEST_CASE("strong Feller sweep smoke run") {
    FellerSweepConfig cfg;
    cfg.T_grid = {1.0, 0.5};
    cfg.family = {make_test_function("exp_neg_y2")};
    QuadratureSettings qs;
    const VerificationReport r = strong_feller_sweep(BesselDim::of(2.0), cfg, qs);
    CHECK(r.passed);
    CHECK_FALSE(r.inconclusive);
}
