#pragma once

namespace bessel {

/**
 * Natural log of the Gamma function for z > 0.
 * Throws std::domain_error for z <= 0.
 */
double log_gamma(double z);

/**
 * log I_nu(z) for nu >= -1, z >= 0, where
 *
 *   I_nu(z) = sum_k (z/2)^(2k+nu) / (k! Gamma(k+nu+1)).
 *
 * The sum is carried in a rescaled mantissa / log-offset representation so
 * that intermediate terms never overflow; truncation happens when the next
 * term falls below 1e-16 of the partial sum, with a hard cap of 500 terms
 * (std::runtime_error if the cap is hit before convergence, which for this
 * series means z beyond roughly 1e3).
 *
 * Returns -infinity when I_nu(z) = 0 (z = 0, nu > 0) and +infinity at the
 * z = 0 pole for nu in (-1, 0).
 */
double log_bessel_i(double nu, double z);

/**
 * I_nu(z) itself. Throws std::overflow_error when the value exceeds the
 * double range instead of silently saturating.
 */
double bessel_i_series(double nu, double z);

} // namespace bessel
