#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace bessel {

struct QuadratureOptions {
    double abs_tol = 1e-10;
    double rel_tol = 1e-10;
    int max_cells = 4000;
};

struct QuadratureOutcome {
    double value = 0.0;
    double error_estimate = 0.0;
    int cells = 0;
    bool converged = false;
};

/** Raised when an integral cannot be produced within its error budget. */
class QuadratureError : public std::runtime_error {
public:
    QuadratureError(const std::string& what, double achieved, double requested)
        : std::runtime_error(what), achieved_error(achieved), requested_tol(requested) {}
    double achieved_error;
    double requested_tol;
};

/**
 * Adaptive Gauss-Kronrod (7,15) integration of f over [breakpoints.front(),
 * breakpoints.back()], with a forced initial subdivision at every interior
 * breakpoint (kinks, jump locations, integrable endpoint singularities).
 *
 * Cells are bisected worst-error-first until the summed Kronrod-vs-Gauss
 * discrepancy falls below max(abs_tol, rel_tol * |value|). Kronrod nodes are
 * interior, so endpoint singularities are never evaluated directly. The
 * final value is accumulated left to right in extended precision, making the
 * result independent of the refinement order. Throws std::invalid_argument
 * on an unsorted breakpoint list and std::runtime_error if the integrand
 * returns a non-finite value at a node.
 */
QuadratureOutcome integrate_adaptive(const std::function<double(double)>& f,
                                     const std::vector<double>& breakpoints,
                                     const QuadratureOptions& opt);

} // namespace bessel
