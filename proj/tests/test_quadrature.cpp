#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "bessel/quadrature.hpp"

using namespace bessel;

TEST_CASE("polynomials are exact") {
    QuadratureOptions opt;
    const auto out = integrate_adaptive([](double x) { return x * x; }, {0.0, 1.0}, opt);
    CHECK(out.converged);
    CHECK(out.value == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("smooth transcendental integrands") {
    QuadratureOptions opt;
    const auto sin_out =
        integrate_adaptive([](double x) { return std::sin(x); }, {0.0, std::numbers::pi}, opt);
    CHECK(sin_out.value == doctest::Approx(2.0).epsilon(1e-14));

    const auto gauss_out = integrate_adaptive(
        [](double x) { return std::exp(-0.5 * x * x); }, {-10.0, 0.0, 10.0}, opt);
    CHECK(gauss_out.value ==
          doctest::Approx(std::sqrt(2.0 * std::numbers::pi)).epsilon(1e-13));
}

TEST_CASE("interior breakpoints capture kinks") {
    QuadratureOptions opt;
    const auto out =
        integrate_adaptive([](double x) { return std::abs(x - 0.5); }, {0.0, 0.5, 1.0}, opt);
    CHECK(out.converged);
    CHECK(out.value == doctest::Approx(0.25).epsilon(1e-15));
}

TEST_CASE("integrable endpoint singularity") {
    QuadratureOptions opt;
    opt.abs_tol = 1e-9;
    opt.rel_tol = 1e-9;
    const auto out =
        integrate_adaptive([](double x) { return 1.0 / std::sqrt(x); }, {0.0, 1.0}, opt);
    CHECK(out.converged);
    CHECK(out.value == doctest::Approx(2.0).epsilon(1e-8));
}

TEST_CASE("starved cell budget reports non-convergence") {
    QuadratureOptions opt;
    opt.abs_tol = 1e-14;
    opt.rel_tol = 1e-14;
    opt.max_cells = 3;
    const auto out =
        integrate_adaptive([](double x) { return std::sin(1000.0 * x); }, {0.0, 1.0}, opt);
    CHECK_FALSE(out.converged);
    CHECK(out.error_estimate > 1e-14);
}

TEST_CASE("invalid inputs are rejected") {
    QuadratureOptions opt;
    CHECK_THROWS_AS(integrate_adaptive([](double) { return 1.0; }, {1.0, 0.0}, opt),
                    std::invalid_argument);
    CHECK_THROWS_AS(integrate_adaptive([](double x) { return 1.0 / x; }, {-1.0, 1.0}, opt),
                    std::runtime_error);
}

TEST_CASE("error estimate bounds the true error on a hard integrand") {
    QuadratureOptions opt;
    opt.abs_tol = 1e-11;
    opt.rel_tol = 1e-11;
    const auto out = integrate_adaptive([](double x) { return std::exp(-x) * std::cos(40.0 * x); },
                                        {0.0, 30.0}, opt);
    CHECK(out.converged);
    // closed form: integral of e^-x cos(kx) over [0, inf) = 1/(1+k^2), tail < e^-30
    CHECK(out.value == doctest::Approx(1.0 / 1601.0).epsilon(1e-9));
}
