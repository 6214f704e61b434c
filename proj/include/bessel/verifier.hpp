#pragma once

#include <cstdint>
#include <vector>

#include "bessel/pathsim.hpp"
#include "bessel/report.hpp"
#include "bessel/semigroup.hpp"
#include "bessel/statistics.hpp"
#include "bessel/test_functions.hpp"

namespace bessel {

/**
 * Discretization budget b(dt) = coeff * sqrt(dt) added to relative
 * tolerances of path-scheme estimates. Calibrated by refining dt over
 * {4e-3, 1e-3, 2.5e-4, 1e-4} for the gradient estimator with the indicator
 * test function (the least smooth in the registry) at delta in
 * {0.5, 0.9, 1, 2}, x = 1, T in {0.5, 1}, n = 4e5 against quadrature
 * values. Observed |gap| beyond 3 se stayed under 0.03 sqrt(dt) for
 * delta >= 0.9 and under 0.23 sqrt(dt) at the binding cell (delta = 0.5,
 * median-of-means, T = 0.5, where the gap includes a dt-independent
 * median-skew component of about 1.7% of the analytic value that the
 * relative term absorbs; the part the budget must cover needs
 * coeff >= 0.19 with seed-noise headroom). 0.25 is the rounded-up envelope.
 */
inline constexpr double k_dt_budget_coeff = 0.25;

/**
 * Pathwise gradient estimate: mean of F(rho_T) (D_T - x) / T over n paths,
 * using D_T - x in place of the step-summed stochastic integral (the two
 * agree in the dt -> 0 limit; their gap is checked separately). Requires
 * delta > 0. With median_of_means the plain mean is replaced by the median
 * of `blocks` block means, for dimensions whose weight lacks a variance.
 *
 * Here and in every operation below that averages a weight exp(c A) with
 * c > 0, the absorption threshold is clamped to
 * max(cfg.rho_floor, k sqrt(c dt)) with k ~ 1.7: below that scale a single
 * step crosses a state rather than resolves it, and the trapezoid increments
 * of A picked up there are grid artifacts that can blow the weight up by
 * hundreds of orders of magnitude. The clamp caps the per-step tilt of the
 * weight at exp(1/k^2), below the per-step absorption rate of a near-floor
 * path, so lingering cannot compound; it is kept as small as that allows
 * because every path frozen at the floor contributes 0 in place of its
 * genuine weight, a bias that grows with the floor.
 */
McEstimate bel_mc_derivative(double delta, const TestFunction& F, double x, double T,
                             std::size_t n, const SamplerConfig& cfg, int workers = 0,
                             bool median_of_means = false, int blocks = 31);

/**
 * Three-way derivative agreement: the estimate above against
 * derivative_semigroup, within max(3 SE, rel_tol |analytic| + b(dt)).
 */
VerificationReport bel_agreement_check(double delta, const TestFunction& F, double x, double T,
                                       std::size_t n, const SamplerConfig& cfg,
                                       const QuadratureSettings& qs, int workers = 0,
                                       bool median_of_means = false, double rel_tol = 0.02);

/**
 * Change-of-dimension identity: simulate at dimension delta, reweight with
 *
 *   W_T = 1{alive} (rho_T/x)^((d'-d)/2) exp(-((d'-d)/2)((d'+d)/4 - 1) A_T),
 *
 * and compare E[F(rho_T) W_T] against the quadrature value of the
 * delta_prime semigroup at x. Requires delta_prime >= max(delta, 2) so the
 * target dimension never absorbs. For delta_prime = delta + 2 the weight
 * collapses to D_T / x. Absorbed paths contribute weight 0 and their count
 * is recorded.
 */
VerificationReport rn_identity_check(double delta, double delta_prime, double x, double T,
                                     const TestFunction& F, std::size_t n,
                                     const SamplerConfig& cfg, const QuadratureSettings& qs,
                                     int workers = 0, double rel_tol = 0.03);

/**
 * E[D_t] = x at every checkpoint, within 3 SE. Checkpoints are rounded to
 * step indices of the cfg.dt grid; D is the frozen product, so this also
 * exercises optional stopping through absorbed paths.
 */
VerificationReport martingale_check(double delta, double x, const std::vector<double>& t_grid,
                                    std::size_t n, const SamplerConfig& cfg, int workers = 0);

/**
 * Integrability diagnostics of D_T for delta < 1, where the critical order
 * is p(delta) = (2-delta)^2 / (4(1-delta)). For each probe order p: the
 * half-sample vs full-sample drift of mean(D^p) (stability, expected small
 * for p < p(delta)) and whether mean(D^p) grows monotonically along an
 * n/8, n/4, n/2, n doubling schedule (divergence, expected for p > p(delta)).
 * A Hill estimate with bootstrap 95% CI on the top tail_fraction of D is
 * compared against p(delta): CI covering p passes; missing by at most 3 CI
 * widths is inconclusive (soft); farther is a failure, provided the read is
 * floor-stable. Stability is probed by bookkeeping the same paths at a 2x
 * coarser absorption threshold: if the Hill estimate moves by more than one
 * CI width under that coarsening, the read has not converged in the floor
 * (the absorption cutoff, not the law, sets the observed tail) and a missed
 * CI is reported inconclusive rather than as a contradiction. The far tail
 * of D is generated by excursions near 0 that no fixed step can resolve, so
 * this outcome is expected at practical step sizes; the probe keeps the
 * failure branch reserved for floor-stable contradictions such as a wrong
 * weight exponent.
 */
VerificationReport moment_tail_diagnostics(double delta, double x, double T, std::size_t n,
                                           const std::vector<double>& p_list,
                                           const SamplerConfig& cfg, int workers = 0,
                                           double tail_fraction = 0.01);

/**
 * Floor sweep of the blowup functionals. For each floor in the (decreasing)
 * grid, n paths are run to the floor or the horizon T with a step fine
 * enough to resolve the floor (dt = min(cfg.dt, floor^2/4)); medians over
 * absorbed paths of A at absorption, max eta, and D just before absorption
 * are recorded. Asserts: A-median strictly increasing and D-median strictly
 * decreasing along the grid; max-eta median strictly increasing exactly
 * when delta < 1 (for delta >= 1 every per-path max eta must equal 1).
 * No absorbed paths at all (delta >= 2) is a vacuous pass with a note;
 * fewer than 30 absorbed paths at some floor is inconclusive.
 */
VerificationReport eta_blowup_check(double delta, double x, double T, std::size_t n,
                                    const std::vector<double>& floor_grid,
                                    const SamplerConfig& cfg, int workers = 0);

/**
 * Gap between the left-point sum of eta dB and D_T - x: the RMS over n
 * paths is fitted as C dt^slope across dt_grid; the identity holds in the
 * limit iff the gap vanishes, and the Euler scheme should show slope
 * about 1/2. Passes when |slope - 0.5| <= 0.15.
 */
VerificationReport stochastic_integral_convergence(double delta, double x, double T,
                                                   const std::vector<double>& dt_grid,
                                                   std::size_t n, const SamplerConfig& cfg,
                                                   int workers = 0);

/**
 * Report form of hitting_time_scaling_check: passes when the two-sample KS
 * statistic between T0(y)/y^2 and T0(1) is below the 1% critical value and
 * the censored fractions of the two runs differ by at most 1 percentage
 * point (the shared scaled horizon makes censoring identical in law, so a
 * larger gap signals a scaling defect rather than noise).
 */
VerificationReport scaling_check_report(double delta, double y, std::size_t n,
                                        const SamplerConfig& cfg, int workers = 0);

/**
 * Zero-dimension absorption law: empirical P(T0 <= s) from start 1 against
 * exp(-1/(2s)) at each s in s_grid, within 3 binomial standard errors.
 */
VerificationReport absorption_cdf_check(const std::vector<double>& s_grid, std::size_t n,
                                        const SamplerConfig& cfg, int workers = 0);

/**
 * Dissipative baseline on the Ornstein-Uhlenbeck semigroup dX = -theta X dt
 * + dB, whose flow derivative is the deterministic e^(-theta t). Checks the
 * pathwise-weight gradient (1/T) E[phi(X_T) sum e^(-theta t_k) dB_k]
 * against the exact Gaussian-kernel derivative within max(3 SE,
 * 2% |analytic|), and the modulus bound
 *
 *   |P_T phi(u) - P_T phi(v)| <= e^(-theta) ||phi|| |u - v| / sqrt(min(T,1))
 *
 * on a (u, v, T) grid.
 */
VerificationReport classical_baseline(double theta, const TestFunction& phi, double x, double T,
                                      std::size_t n, double dt, std::uint64_t seed,
                                      int workers = 0);

} // namespace bessel
