#pragma once

#include <vector>

#include "bessel/dimension.hpp"
#include "bessel/kernels.hpp"
#include "bessel/quadrature.hpp"
#include "bessel/report.hpp"
#include "bessel/test_functions.hpp"

namespace bessel {

struct QuadratureSettings {
    double abs_tol = 1e-10;
    double rel_tol = 1e-10;
    double upper_cutoff_sigmas = 12.0; // initial truncation at x + sigmas*sqrt(T)
    int max_cells = 4000;

    void validate() const {
        if (!(abs_tol > 0.0) || !(rel_tol > 0.0))
            throw std::invalid_argument("QuadratureSettings: tolerances must be positive");
        if (!(upper_cutoff_sigmas >= 6.0))
            throw std::invalid_argument("QuadratureSettings: cutoff below 6 sigmas loses tail mass");
    }
};

/** One semigroup evaluation request P^delta_T F(x). */
struct SemigroupQuery {
    BesselDim dim;
    double T = 1.0;
    double x = 0.0;
    TestFunction F;
    QuadratureSettings quad;
};

/**
 * P^delta_T F(x) = integral of F against the transition kernel, plus the
 * origin atom exp(-x^2/(2T)) F(0) when delta = 0.
 *
 * The integration domain is truncated at a point where a Chernoff bound on
 * the squared-radius tail certifies that the discarded mass times ||F|| is
 * below a small fraction of the absolute tolerance; the cutoff is pushed
 * outward automatically until that holds. Forced subdivision at y = x and at
 * every declared jump of F. Non-convergence raises QuadratureError with the
 * achieved error estimate; a sampled |F| above its declared sup norm raises
 * std::invalid_argument.
 */
double apply_kernel(const SemigroupQuery& q);

/**
 * d/dx P^delta_T F(x) through the dimension-shift identity
 *
 *   d/dx P^delta_T F(x) = (x/T) (P^(delta+2)_T F(x) - P^delta_T F(x)),
 *
 * valid for every bounded Borel F. Returns exactly 0 at x = 0 (Neumann
 * behaviour at the origin).
 */
double derivative_semigroup(const SemigroupQuery& q);

/**
 * Central difference (P(x+h) - P(x-h)) / (2h), O(h^2) bias; falls back to
 * the O(h) forward difference when x < h so the kernel is never evaluated
 * at a negative start point.
 */
double fd_derivative(const SemigroupQuery& q, double h);

/** Chernoff bound on P(rho_T > Y | rho_0 = x) for the delta-dim process. */
double squared_radius_tail_bound(double delta, double T, double x, double Y);

struct FellerSweepConfig {
    std::vector<double> T_grid;        // strictly decreasing
    double R = 3.0;                    // modulus checked on [0, R]
    std::vector<TestFunction> family;  // sup norms must be <= 1
    int feller_points = 13;            // x-grid for the pairwise modulus
    double gradient_grid_step = 0.05;  // x-grid step for G(T)
    bool exploratory = false;          // record T^alpha G(T) without asserting
};

/**
 * Strong-Feller modulus sweep.
 *
 * Asserts |P_T F(x) - P_T F(y)| <= (2R/T) |x-y| for all grid pairs in [0,R]
 * and every F in the family. For delta >= 1 additionally asserts the sharper
 * gradient bound sup |d/dx P_T F| <= ||F|| T^(-1/2). For delta >= 2(sqrt2-1)
 * computes G(T) = max over the family and the x-grid of |d/dx P_T F| and the
 * sequence T^alpha(delta) G(T); boundedness is asserted through the max/min
 * ratio of that sequence staying below 3 across the T grid (a plateau
 * check, meaningful because the family contains an indicator, for which the
 * T^(-alpha) rate is saturated). With `exploratory` set, dimensions below
 * 2(sqrt2-1) record the extrapolated-alpha sequence without asserting it.
 */
VerificationReport strong_feller_sweep(const BesselDim& dim, const FellerSweepConfig& cfg,
                                       const QuadratureSettings& qs);

} // namespace bessel
