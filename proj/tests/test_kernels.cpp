#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "bessel/dimension.hpp"
#include "bessel/kernels.hpp"
#include "bessel/quadrature.hpp"

using namespace bessel;

namespace {
double density(double delta, double T, double x, double y) {
    return transition_density({BesselDim::of(delta), T, x, y});
}
} // namespace

// Interior and boundary values below were frozen from an independent
// 40-digit arbitrary-precision evaluation of the closed-form kernel.

TEST_CASE("transition density interior references") {
    CHECK(density(0.5, 0.5, 1.0, 0.7) ==
          doctest::Approx(0.501225653043768242286657392225).epsilon(1e-13));
    CHECK(density(3.0, 0.8, 1.2, 0.5) ==
          doctest::Approx(0.106291713154543604601050714837).epsilon(1e-13));
    CHECK(density(1.5, 2.0, 0.3, 2.2) ==
          doctest::Approx(0.258671632598569138067086362928).epsilon(1e-13));
}

TEST_CASE("start at the origin uses the boundary form") {
    CHECK(density(0.5, 1.0, 0.0, 1.3) ==
          doctest::Approx(0.174759546216507897435160009695).epsilon(1e-13));
    // generic continuity: x -> 0 limit of the interior form
    const double lim = density(2.5, 0.7, 1e-8, 0.9);
    CHECK(density(2.5, 0.7, 0.0, 0.9) == doctest::Approx(lim).epsilon(1e-6));
}

TEST_CASE("value at y = 0 splits at dimension 1") {
    // above dimension 1 the density vanishes at the origin
    CHECK(density(1.5, 0.9, 0.4, 0.0) == 0.0);
    CHECK(density(3.0, 0.9, 0.4, 0.0) == 0.0);
    // at dimension 1 it has the reflected-Gaussian value
    const double T = 0.9, x = 0.4;
    const double expected =
        std::sqrt(2.0 / (std::numbers::pi * T)) * std::exp(-x * x / (2.0 * T));
    CHECK(density(1.0, T, x, 0.0) == doctest::Approx(expected).epsilon(1e-13));
    // below dimension 1 it blows up
    CHECK(std::isinf(density(0.5, T, x, 0.0)));
}

TEST_CASE("dimension 0 kernel carries an atom") {
    CHECK_THROWS_AS(density(0.0, 1.0, 1.0, 0.5), std::domain_error);

    const Delta0Kernel k = kernel_atom_delta0(0.7, 0.8);
    CHECK(k.atom == doctest::Approx(std::exp(-0.64 / 1.4)).epsilon(1e-15));
    CHECK(k.density(1.1) ==
          doctest::Approx(0.232060065815980772814771653958).epsilon(1e-13));

    // started at the origin the process never leaves it
    const Delta0Kernel k0 = kernel_atom_delta0(0.7, 0.0);
    CHECK(k0.atom == 1.0);
    CHECK(k0.density(0.9) == 0.0);
    CHECK(k0.density(0.0) == 0.0);
}

TEST_CASE("squared-radius Laplace transform closed form") {
    // delta = 0.5, T = 1, z = 1, lambda = 1: exp(-1/3) * 3^(-1/4)
    CHECK(sq_bessel_laplace(0.5, 1.0, 1.0, 1.0) ==
          doctest::Approx(std::exp(-1.0 / 3.0) * std::pow(3.0, -0.25)).epsilon(1e-15));
    // dimension 0: pure exponential factor
    for (double lam : {0.25, 1.0, 3.0})
        CHECK(sq_bessel_laplace(0.0, 0.6, 1.7, lam) ==
              doctest::Approx(std::exp(-lam * 1.7 / (1.0 + 1.2 * lam))).epsilon(1e-15));
    // start at zero: pure power factor
    for (double delta : {0.5, 2.0, 3.0})
        CHECK(sq_bessel_laplace(delta, 0.8, 0.0, 2.0) ==
              doctest::Approx(std::pow(1.0 + 2.0 * 2.0 * 0.8, -delta / 2.0)).epsilon(1e-15));
    // lambda = 0 is total mass 1
    CHECK(sq_bessel_laplace(1.5, 2.0, 3.0, 0.0) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("two half-steps compose to one full step") {
    QuadratureOptions opt;
    opt.abs_tol = 1e-12;
    opt.rel_tol = 1e-12;
    struct Case {
        double delta, x, y, T;
    };
    for (const Case& c : {Case{2.5, 0.9, 1.4, 0.8}, Case{1.2, 0.5, 0.3, 0.6}}) {
        const double direct = density(c.delta, c.T, c.x, c.y);
        const double upper = std::max(c.x, c.y) + 10.0 * std::sqrt(c.T) + 5.0;
        const auto out = integrate_adaptive(
            [&](double z) {
                return density(c.delta, c.T / 2.0, c.x, z) * density(c.delta, c.T / 2.0, z, c.y);
            },
            {0.0, std::min(c.x, c.y), std::max(c.x, c.y), upper}, opt);
        CHECK(out.converged);
        CHECK(out.value == doctest::Approx(direct).epsilon(1e-6));
    }
}
