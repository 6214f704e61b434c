#pragma once

#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>

namespace bessel {

// Dimension below which the improved Hoelder modulus of the semigroup is not
// established and the critical integrability exponent of the flow derivative
// drops to 2.
inline constexpr double k_delta_star = 2.0 * (std::numbers::sqrt2 - 1.0);

/**
 * Parameter bundle for a Bessel process of dimension delta >= 0.
 *
 * nu            index of the modified Bessel function appearing in the
 *               transition density, nu = delta/2 - 1.
 * p_threshold   critical exponent p(delta): the flow derivative weight
 *               rho_t * eta_t is L^p-bounded up to T0 exactly for
 *               p <= p(delta), with
 *                   p(delta) = (2 - delta)^2 / (4 (1 - delta))   delta < 1,
 *                   p(delta) = +infinity                          delta >= 1.
 * alpha_exponent()  Hoelder-in-time exponent alpha(delta) of the gradient
 *               bound sup |d/dx P_T F| <= C ||F|| / T^alpha, defined for
 *               delta >= 2(sqrt(2)-1):
 *                   alpha = 1/2 + (1-delta)/(2-delta)   on [2(sqrt2-1), 1],
 *                   alpha = 1/2                          for delta >= 1.
 */
struct BesselDim {
    double delta;
    double nu;
    double p_threshold;

    static BesselDim of(double delta) {
        if (!(delta >= 0.0))
            throw std::domain_error("BesselDim: dimension must be >= 0");
        BesselDim d;
        d.delta = delta;
        d.nu = delta / 2.0 - 1.0;
        if (delta < 1.0)
            d.p_threshold = (2.0 - delta) * (2.0 - delta) / (4.0 * (1.0 - delta));
        else
            d.p_threshold = std::numeric_limits<double>::infinity();
        return d;
    }

    std::optional<double> alpha_exponent() const {
        if (delta < k_delta_star) return std::nullopt;
        if (delta >= 1.0) return 0.5;
        return 0.5 + (1.0 - delta) / (2.0 - delta);
    }

    // Extension of the alpha formula below 2(sqrt2-1); unproven territory,
    // used only by the exploratory sweep mode which records without asserting.
    double alpha_exponent_extrapolated() const {
        if (delta >= 1.0) return 0.5;
        return 0.5 + (1.0 - delta) / (2.0 - delta);
    }
};

} // namespace bessel
