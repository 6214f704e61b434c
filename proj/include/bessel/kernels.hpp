#pragma once

#include <functional>

#include "bessel/dimension.hpp"

namespace bessel {

/** Point evaluation request for a transition density. */
struct DensityQuery {
    BesselDim dim;
    double T;
    double x;
    double y;
};

/**
 * Transition density p^delta_T(x, y) of the Bessel process of dimension
 * delta > 0, with respect to Lebesgue measure in y on [0, infinity):
 *
 *   p^delta_T(x,y) = (1/T) (y/x)^nu y exp(-(x^2+y^2)/(2T)) I_nu(xy/T),  x > 0,
 *   p^delta_T(0,y) = 2^-nu T^-(nu+1) / Gamma(nu+1) y^(2nu+1) exp(-y^2/(2T)),
 *
 * with nu = delta/2 - 1. Evaluation is carried in log space and
 * exponentiated once at the end. For delta < 1 the density has an
 * integrable y^(delta-1) singularity at y = 0; the y = 0 limit is returned
 * as +infinity there, as 0 for delta > 1 and as the reflected-Gaussian
 * value sqrt(2/(pi T)) exp(-x^2/(2T)) for delta = 1.
 *
 * Throws std::domain_error for delta = 0 (that kernel has an atom at the
 * origin and lives in kernel_atom_delta0), T <= 0, or negative x, y.
 */
double transition_density(const DensityQuery& q);

/** The dimension-zero kernel: atom weight at the origin plus a density. */
struct Delta0Kernel {
    double atom;                                  // exp(-x^2/(2T))
    std::function<double(double)> density;        // continuous part in y
};

/**
 * Kernel of the dimension-zero semigroup started at x:
 *
 *   P^0_T F(x) = exp(-x^2/(2T)) F(0) + integral_0^inf q_T(x,y) F(y) dy,
 *   q_T(x,y)   = (1/T) exp(-(x^2+y^2)/(2T)) x I_1(xy/T),
 *
 * where x I_1(xy/T) = sum_k x^(2k+2) (y/(2T))^(2k+1) / (k!(k+1)!).
 * At x = 0 the atom weight is 1 and the density vanishes identically.
 */
Delta0Kernel kernel_atom_delta0(double T, double x);

/**
 * Laplace transform of the squared Bessel endpoint: for the squared Bessel
 * process X of dimension delta started at z,
 *
 *   E[exp(-lambda X_T)] = exp(-lambda z / (1+2 lambda T)) (1+2 lambda T)^(-delta/2).
 */
double sq_bessel_laplace(double delta, double T, double z, double lambda);

} // namespace bessel
