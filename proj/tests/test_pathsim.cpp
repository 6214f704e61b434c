#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>
#include <vector>

#include "bessel/dimension.hpp"
#include "bessel/kernels.hpp"
#include "bessel/parallel.hpp"
#include "bessel/pathsim.hpp"
#include "bessel/quadrature.hpp"
#include "bessel/rng.hpp"
#include "bessel/statistics.hpp"

using namespace bessel;

TEST_CASE("exact endpoint sampler is deterministic per stream") {
    Xoshiro256pp r1 = make_stream_rng(7, 3);
    Xoshiro256pp r2 = make_stream_rng(7, 3);
    Xoshiro256pp r3 = make_stream_rng(7, 4);
    const double a = sample_exact_endpoint(1.5, 1.0, 1.0, r1);
    const double b = sample_exact_endpoint(1.5, 1.0, 1.0, r2);
    const double c = sample_exact_endpoint(1.5, 1.0, 1.0, r3);
    CHECK(a == b);
    CHECK(a != c);
}

TEST_CASE("exact endpoint sampler first moment and zero-dimension atom") {
    const std::size_t n = 20000;
    std::vector<double> xs = mc_samples(n, 11, 0, [](std::size_t, Xoshiro256pp& rng) {
        return sample_exact_endpoint(2.0, 1.0, 1.0, rng);
    });
    const McEstimate est = mc_from_samples(xs, 11);
    CHECK(std::abs(est.mean - 3.0) <= 4.0 * est.std_error); // E = z0 + delta T

    std::vector<double> zs = mc_samples(n, 12, 0, [](std::size_t, Xoshiro256pp& rng) {
        return sample_exact_endpoint(0.0, 1.0, 1.0, rng) == 0.0 ? 1.0 : 0.0;
    });
    const McEstimate atom = mc_from_samples(zs, 12);
    CHECK(std::abs(atom.mean - std::exp(-0.5)) <= 4.0 * atom.std_error);

    // degenerate inputs
    Xoshiro256pp rng = make_stream_rng(1, 0);
    CHECK(sample_exact_endpoint(0.0, 0.0, 1.0, rng) == 0.0);
}

TEST_CASE("endpoint sampler matches the kernel law (one-sample KS)") {
    QuadratureOptions opt;
    opt.abs_tol = 1e-9;
    opt.rel_tol = 1e-9;
    for (double delta : {0.5, 3.0}) {
        const double x = 1.0, T = 1.0;
        std::vector<double> rho = mc_samples(1000, 21, 0, [&](std::size_t, Xoshiro256pp& rng) {
            return std::sqrt(sample_exact_endpoint(delta, x * x, T, rng));
        });
        const BesselDim dim = BesselDim::of(delta);
        const auto cdf = [&](double y) {
            if (y <= 0.0) return 0.0;
            return integrate_adaptive(
                       [&](double z) { return transition_density({dim, T, x, z}); },
                       {0.0, std::min(y, x), y}, opt)
                .value;
        };
        const KsResult ks = ks_one_sample(rho, cdf);
        CHECK(ks.pass_1pct());
    }
}

TEST_CASE("Monte-Carlo draws do not depend on the worker cap") {
    const auto fn = [](std::size_t, Xoshiro256pp& rng) {
        return sample_exact_endpoint(0.5, 2.0, 0.7, rng);
    };
    const std::vector<double> w1 = mc_samples(101, 5, 1, fn);
    const std::vector<double> w2 = mc_samples(101, 5, 2, fn);
    const std::vector<double> w5 = mc_samples(101, 5, 5, fn);
    CHECK(w1 == w2);
    CHECK(w1 == w5);
}

TEST_CASE("path structure and flow-functional freeze at absorption") {
    SamplerConfig cfg;
    cfg.dt = 1e-3;
    cfg.rho_floor = 1e-2; // large floor so absorption is common
    const double delta = 0.5, x = 0.3, T = 1.0;

    bool saw_absorbed = false;
    for (std::uint64_t s = 0; s < 8; ++s) {
        Xoshiro256pp rng = make_stream_rng(100 + s, 0);
        const BesselPath p = simulate_path(delta, x, T, cfg, rng);
        const std::size_t N = p.db.size();
        REQUIRE(p.times.size() == N + 1);
        REQUIRE(p.rho.size() == N + 1);
        CHECK(p.rho[0] == x);
        CHECK(p.eta[0] == 1.0);
        CHECK(p.d_vals[0] == x);
        CHECK(p.dt_eff == doctest::Approx(T / static_cast<double>(N)).epsilon(1e-15));

        for (std::size_t k = 0; k + 1 <= N; ++k)
            CHECK(p.a_vals[k + 1] >= p.a_vals[k]); // additive functional never decreases

        if (!p.absorbed()) continue;
        saw_absorbed = true;
        const std::size_t t0 = p.t0_index;
        REQUIRE(t0 >= 1);
        CHECK(p.rho[t0] <= cfg.rho_floor);
        CHECK(p.a_vals[t0] == p.a_vals[t0 - 1]); // crossing sub-interval dropped
        for (std::size_t k = 0; k < t0; ++k) {
            CHECK(p.eta[k] ==
                  doctest::Approx(std::exp(0.5 * (1.0 - delta) * p.a_vals[k])).epsilon(1e-14));
            CHECK(p.d_vals[k] == doctest::Approx(p.rho[k] * p.eta[k]).epsilon(1e-14));
        }
        for (std::size_t k = t0; k <= N; ++k) {
            CHECK(p.eta[k] == 0.0);
            CHECK(p.d_vals[k] == 0.0);
            CHECK(p.a_vals[k] == p.a_vals[t0]);
        }
    }
    CHECK(saw_absorbed);
}

TEST_CASE("discrete stochastic integral tracks the martingale increment") {
    SamplerConfig cfg;
    double mean_gap_coarse = 0.0, mean_gap_fine = 0.0;
    for (std::uint64_t s = 0; s < 20; ++s) {
        cfg.dt = 1e-2;
        Xoshiro256pp r1 = make_stream_rng(40 + s, 0);
        const BesselPath coarse = simulate_path(2.0, 1.0, 1.0, cfg, r1);
        mean_gap_coarse += std::abs(discrete_stochastic_integral(coarse) -
                                    (coarse.d_vals.back() - 1.0));
        cfg.dt = 1e-4;
        Xoshiro256pp r2 = make_stream_rng(40 + s, 0);
        const BesselPath fine = simulate_path(2.0, 1.0, 1.0, cfg, r2);
        mean_gap_fine +=
            std::abs(discrete_stochastic_integral(fine) - (fine.d_vals.back() - 1.0));
    }
    CHECK(mean_gap_fine < mean_gap_coarse);
}

TEST_CASE("coupled paths keep their order above the step scale") {
    SamplerConfig cfg;
    cfg.dt = 1e-3;
    std::size_t total_violations = 0;
    for (std::uint64_t s = 0; s < 20; ++s) {
        Xoshiro256pp rng = make_stream_rng(3000 + s, 0);
        const CoupledFlow cf = coupled_flow(1.5, 0.3, 0.4, 1.0, cfg, rng);
        total_violations += cf.violations;
        CHECK(cf.violation_scale > 0.0);
        REQUIRE(cf.path_x.rho.size() == cf.path_y.rho.size());
    }
    CHECK(total_violations == 0);
}

TEST_CASE("coupled paths coalesce after both reach the floor") {
    SamplerConfig cfg;
    cfg.dt = 1e-3;
    std::size_t coalesced = 0;
    for (std::uint64_t s = 0; s < 40; ++s) {
        Xoshiro256pp rng = make_stream_rng(5000 + s, 0);
        const CoupledFlow cf = coupled_flow(0.5, 0.2, 0.21, 1.0, cfg, rng);
        if (cf.first_floor_pair_index == k_never) continue;
        ++coalesced;
        CHECK(cf.post_floor_max_gap <= cfg.rho_floor);
    }
    CHECK(coalesced > 0);
}

TEST_CASE("binary dump round-trips") {
    SamplerConfig cfg;
    cfg.dt = 1e-3;
    Xoshiro256pp rng = make_stream_rng(9, 0);
    const BesselPath p = simulate_path(1.5, 0.8, 0.5, cfg, rng);

    std::stringstream ss(std::ios::in | std::ios::out | std::ios::binary);
    dump_path(p, 1.5, 0.8, 0.5, ss);
    double delta = 0, x = 0, T = 0;
    const BesselPath q = load_path(ss, &delta, &x, &T);

    CHECK(delta == doctest::Approx(1.5).epsilon(1e-6)); // header floats are float32
    CHECK(x == doctest::Approx(0.8).epsilon(1e-6));
    CHECK(T == doctest::Approx(0.5).epsilon(1e-6));
    REQUIRE(q.rho.size() == p.rho.size());
    CHECK(q.times == p.times); // records are float64: bit-exact
    CHECK(q.rho == p.rho);
    CHECK(q.eta == p.eta);
    CHECK(q.d_vals == p.d_vals);
}

TEST_CASE("load rejects foreign data") {
    std::stringstream ss(std::ios::in | std::ios::out | std::ios::binary);
    ss << "definitely not a path dump and long enough to cover a header";
    CHECK_THROWS(load_path(ss));
}

TEST_CASE("floor functionals re-derive the stored flow state") {
    SamplerConfig cfg;
    cfg.dt = 5e-4;
    cfg.rho_floor = 1e-3;
    const double delta = 0.5, x = 0.3;
    bool exercised = false;
    for (std::uint64_t s = 0; s < 12; ++s) {
        Xoshiro256pp rng = make_stream_rng(700 + s, 0);
        const BesselPath p = simulate_path(delta, x, 1.0, cfg, rng);
        const FloorFunctionals ff = floor_functionals(p.rho, p.dt_eff, delta, cfg.rho_floor);
        CHECK(ff.t0_index == p.t0_index);
        if (!p.absorbed()) continue;
        exercised = true;
        CHECK(ff.a_at_hit == doctest::Approx(p.a_vals[p.t0_index]).epsilon(1e-12));
        CHECK(ff.d_before_hit == doctest::Approx(p.d_vals[p.t0_index - 1]).epsilon(1e-12));
        double max_eta = 0.0;
        for (std::size_t k = 0; k < p.t0_index; ++k) max_eta = std::max(max_eta, p.eta[k]);
        CHECK(ff.max_eta == doctest::Approx(max_eta).epsilon(1e-12));

        // a larger floor is reached first and accumulates less of the integral
        const FloorFunctionals wide = floor_functionals(p.rho, p.dt_eff, delta, 1e-2);
        if (wide.t0_index != k_never) {
            CHECK(wide.t0_index <= ff.t0_index);
            CHECK(wide.a_at_hit <= ff.a_at_hit);
        }
    }
    CHECK(exercised);
}

TEST_CASE("hitting-time sampler censors at the scaled horizon") {
    SamplerConfig cfg;
    cfg.dt = 1e-3;
    const HittingSample hs = hitting_time_scaling_sample(1.0, 1.0, 300, cfg);
    CHECK(hs.horizon == 50.0);
    CHECK(hs.t0.size() == 300);
    std::size_t at_horizon = 0;
    for (double t : hs.t0) {
        CHECK(t > 0.0);
        CHECK(t <= hs.horizon);
        if (t == hs.horizon) ++at_horizon;
    }
    CHECK(at_horizon == hs.censored);
    CHECK(hs.censored < 300);
}
