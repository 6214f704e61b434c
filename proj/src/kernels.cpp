#include "bessel/kernels.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "bessel/special_functions.hpp"

namespace bessel {

namespace {

void validate_common(double T, double x, double y) {
    if (!(T > 0.0)) throw std::domain_error("transition density: T must be > 0");
    if (!(x >= 0.0) || !(y >= 0.0))
        throw std::domain_error("transition density: x, y must be >= 0");
}

// Started-at-the-origin closed form, log space.
double boundary_density(double nu, double T, double y) {
    const double expo = 2.0 * nu + 1.0;
    if (y == 0.0) {
        if (expo > 0.0) return 0.0;
        if (expo == 0.0) return std::sqrt(2.0 / (std::acos(-1.0) * T));
        return std::numeric_limits<double>::infinity();
    }
    const double lp = -nu * std::log(2.0) - (nu + 1.0) * std::log(T) - log_gamma(nu + 1.0)
                      + expo * std::log(y) - y * y / (2.0 * T);
    return std::exp(lp);
}

} // namespace

double transition_density(const DensityQuery& q) {
    const double delta = q.dim.delta;
    const double nu = q.dim.nu;
    if (!(delta > 0.0))
        throw std::domain_error("transition_density: requires delta > 0; "
                                "the delta = 0 kernel is kernel_atom_delta0");
    validate_common(q.T, q.x, q.y);

    if (q.x == 0.0) return boundary_density(nu, q.T, q.y);

    if (q.y == 0.0) {
        // Limit of y^(2nu+1): delta > 1 vanishes, delta = 1 is the reflected
        // Gaussian value, delta < 1 diverges (integrably).
        if (delta > 1.0) return 0.0;
        if (delta == 1.0)
            return std::sqrt(2.0 / (std::acos(-1.0) * q.T)) * std::exp(-q.x * q.x / (2.0 * q.T));
        return std::numeric_limits<double>::infinity();
    }

    const double lp = -std::log(q.T) + nu * (std::log(q.y) - std::log(q.x)) + std::log(q.y)
                      - (q.x * q.x + q.y * q.y) / (2.0 * q.T)
                      + log_bessel_i(nu, q.x * q.y / q.T);
    return std::exp(lp);
}

Delta0Kernel kernel_atom_delta0(double T, double x) {
    validate_common(T, x, 0.0);
    Delta0Kernel k;
    k.atom = std::exp(-x * x / (2.0 * T));
    if (x == 0.0) {
        k.density = [](double) { return 0.0; };
        return k;
    }
    k.density = [T, x](double y) {
        if (!(y >= 0.0)) throw std::domain_error("delta-0 density: y must be >= 0");
        if (y == 0.0) return 0.0;
        const double lq = -std::log(T) - (x * x + y * y) / (2.0 * T) + std::log(x)
                          + log_bessel_i(1.0, x * y / T);
        return std::exp(lq);
    };
    return k;
}

double sq_bessel_laplace(double delta, double T, double z, double lambda) {
    if (!(delta >= 0.0)) throw std::domain_error("sq_bessel_laplace: delta must be >= 0");
    if (!(T > 0.0)) throw std::domain_error("sq_bessel_laplace: T must be > 0");
    if (!(z >= 0.0)) throw std::domain_error("sq_bessel_laplace: z must be >= 0");
    if (!(lambda >= 0.0)) throw std::domain_error("sq_bessel_laplace: lambda must be >= 0");
    const double u = 1.0 + 2.0 * lambda * T;
    return std::exp(-lambda * z / u) * std::pow(u, -delta / 2.0);
}

} // namespace bessel
