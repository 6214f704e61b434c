#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "bessel/rng.hpp"

namespace bessel {

inline constexpr std::size_t k_never = static_cast<std::size_t>(-1);

enum class Scheme { euler_sq_bessel_truncated };

struct SamplerConfig {
    double dt = 1e-3;
    double rho_floor = 1e-6; // discretized hitting threshold epsilon_0
    Scheme scheme = Scheme::euler_sq_bessel_truncated;
    std::uint64_t seed = 42;
    std::uint64_t stream_id = 0;

    void validate() const;
};

/**
 * Discrete Bessel path on the uniform grid t_k = k * dt_eff, k = 0..N,
 * dt_eff = T / N, produced by the truncated Euler scheme on the squared
 * process,
 *
 *   X_{k+1} = max(X_k + 2 sqrt(X_k) dB_k + delta dt, 0),   rho_k = sqrt(X_k).
 *
 * t0_index   first k with rho_k <= rho_floor (k_never if the floor is
 *            never reached). The squared recursion itself keeps running to
 *            the horizon; only the derived functionals freeze.
 * a_vals     trapezoid accumulation A_k ~ integral of 1/rho^2 up to t_k; the
 *            sub-interval ending at t0_index is dropped (its right endpoint
 *            sits at the floor where 1/rho^2 is pure discretization noise)
 *            and the value is frozen from t0_index-1 on.
 * eta        flow derivative eta_k = exp(((1-delta)/2) A_k) before the floor
 *            hit, 0 from t0_index on; eta_0 = 1.
 * d_vals     D_k = rho_k * eta_k, the derivative-weight martingale; 0 from
 *            t0_index on.
 * db         Brownian increments, db[k] = B_{t_{k+1}} - B_{t_k}.
 */
struct BesselPath {
    std::vector<double> times, rho, db, a_vals, eta, d_vals;
    std::size_t t0_index = k_never;
    double dt_eff = 0.0;
    bool absorbed() const { return t0_index != k_never; }
};

/**
 * Exact draw of the squared Bessel endpoint X_T given X_0 = z0: mix
 * N ~ Poisson(z0/(2T)), then Gamma(delta/2 + N, scale 2) scaled by T.
 * Shape exactly 0 (delta = 0, N = 0) is the point mass at the absorbing
 * origin, which carries probability exp(-z0/(2T)).
 */
double sample_exact_endpoint(double delta, double z0, double T, Xoshiro256pp& rng);

/** Truncated-Euler path from rho_0 = x > 0; requires delta >= 0, T > 0. */
BesselPath simulate_path(double delta, double x, double T, const SamplerConfig& cfg,
                         Xoshiro256pp& rng);

/** Left-point Ito sum  sum_k eta_k dB_k  over the whole grid. */
double discrete_stochastic_integral(const BesselPath& path);

/**
 * Two starts x < y driven by the same Brownian increments.
 *
 * violations counts order-flip events, indices where rho(x) <= rho(y) held
 * and rho(x) > rho(y) holds next, at a meaningful scale. The truncated
 * update map is monotone except below the bounce scale: expanding the update
 * shows that a flip forces both post-flip squared values under delta*dt, so
 * a flip observed with either path above
 * violation_scale = sqrt(delta*dt) + rho_floor signals a scheme defect and
 * counts as a violation, while flips inside the bounce scale are expected
 * floor-regime artifacts counted separately in subscale_flips. Once flipped
 * the (tiny) inversion persists through regrowth by the same monotonicity,
 * so persistence is deliberately not re-counted.
 *
 * meet_index is the first index with |rho_k(y) - rho_k(x)| <= rho_floor and
 * post_meet_max_gap the largest later gap. first_floor_pair_index is the
 * first index with both paths at or under the floor; in practice both hit
 * exact zero there (the truncation maps a negative proposal to 0 and the
 * noise term vanishes at 0), after which the shared increments keep them
 * identical, so post_floor_max_gap measures discrete coalescence.
 */
struct CoupledFlow {
    BesselPath path_x, path_y;
    std::size_t violations = 0;
    std::size_t subscale_flips = 0;
    double violation_scale = 0.0;
    std::size_t meet_index = k_never;
    double post_meet_max_gap = 0.0;
    std::size_t first_floor_pair_index = k_never;
    double post_floor_max_gap = 0.0;
};

CoupledFlow coupled_flow(double delta, double x, double y, double T, const SamplerConfig& cfg,
                         Xoshiro256pp& rng);

/**
 * n independent first-hitting times of the floor from start y, delta < 2.
 * Paths still above the floor at the horizon 50*y^2 are censored: recorded
 * at the horizon value and counted. In scaled units t/y^2 the horizon is the
 * same for every start, so censoring is distribution-consistent and the
 * scaled samples remain comparable across starts.
 */
struct HittingSample {
    std::vector<double> t0;      // hitting times, censored entries = horizon
    std::size_t censored = 0;
    double horizon = 0.0;
};

HittingSample hitting_time_scaling_sample(double delta, double y, std::size_t n,
                                          const SamplerConfig& cfg, int workers = 0);

/**
 * Scaling property T0(y) = y^2 T0(1) in law: draws n hitting times from y
 * and from 1, divides the former by y^2, and compares by a two-sample KS
 * statistic. The y-run uses step dt*y^2 and floor rho_floor*y so the two
 * discretizations coincide in scaled units; censored entries land on the
 * shared scaled horizon (50) and the censored fractions are reported for a
 * consistency check.
 */
struct ScalingCheck {
    HittingSample sample_y; // t0 already divided by y^2
    HittingSample sample_1;
    double ks_statistic = 0.0;
    double ks_critical_1pct = 0.0;
    double censor_gap = 0.0; // |censored fraction(y) - censored fraction(1)|
};

ScalingCheck hitting_time_scaling_check(double delta, double y, std::size_t n,
                                        const SamplerConfig& cfg, int workers = 0);

/**
 * Binary path dump. 32-byte header: magic "BPATH01\0", then delta, x, T,
 * dt_eff as little-endian float32, then N (step count) as little-endian
 * uint64; followed by N+1 records of (t, rho, eta, d) as little-endian
 * float64.
 */
void dump_path(const BesselPath& path, double delta, double x, double T, std::ostream& os);
BesselPath load_path(std::istream& is, double* delta = nullptr, double* x = nullptr,
                     double* T = nullptr);

/**
 * Functionals of a squared-process trajectory re-evaluated at an arbitrary
 * floor (the raw rho sequence does not depend on the floor, so floor sweeps
 * can share trajectories when the step is fixed). Returns the hit index,
 * A at the hit (last sub-interval dropped), max eta before the hit and D
 * just before the hit.
 */
struct FloorFunctionals {
    std::size_t t0_index = k_never;
    double a_at_hit = 0.0;
    double max_eta = 0.0;
    double d_before_hit = 0.0;
};

FloorFunctionals floor_functionals(const std::vector<double>& rho, double dt_eff, double delta,
                                   double floor);

} // namespace bessel
