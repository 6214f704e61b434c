#include "bessel/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace bessel {

namespace {

// Node tables from Boost.Math: positive half-axis abscissas, even indices of
// the Kronrod array are the embedded Gauss-7 points.
const std::array<double, 8>& gk_abscissa() {
    return boost::math::quadrature::gauss_kronrod<double, 15>::abscissa();
}
const std::array<double, 8>& gk_weights() {
    return boost::math::quadrature::gauss_kronrod<double, 15>::weights();
}
const std::array<double, 4>& g7_weights() {
    return boost::math::quadrature::gauss<double, 7>::weights();
}

struct Cell {
    double a, b;
    double val;
    double err;
};

// One GK(7,15) pass over [a, b]; error taken as the raw Kronrod-Gauss
// discrepancy, a conservative estimate of the Kronrod value's error.
Cell evaluate_cell(const std::function<double(double)>& f, double a, double b) {
    const auto& xk = gk_abscissa();
    const auto& wk = gk_weights();
    const auto& wg = g7_weights();

    const double m = 0.5 * (a + b);
    const double h = 0.5 * (b - a);

    const double f0 = f(m);
    double kron = wk[0] * f0;
    double gauss = wg[0] * f0;
    for (int i = 1; i < 8; ++i) {
        const double fp = f(m + h * xk[i]);
        const double fm = f(m - h * xk[i]);
        kron += wk[i] * (fp + fm);
        if ((i & 1) == 0) gauss += wg[i / 2] * (fp + fm);
    }
    Cell c;
    c.a = a;
    c.b = b;
    c.val = h * kron;
    c.err = std::abs(h * (kron - gauss));
    if (!std::isfinite(c.val))
        throw std::runtime_error("integrate_adaptive: integrand produced a non-finite value");
    return c;
}

struct WorstFirst {
    bool operator()(const Cell& l, const Cell& r) const {
        if (l.err != r.err) return l.err > r.err;
        return l.a < r.a; // total order keeps refinement deterministic
    }
};

} // namespace

QuadratureOutcome integrate_adaptive(const std::function<double(double)>& f,
                                     const std::vector<double>& breakpoints,
                                     const QuadratureOptions& opt) {
    if (breakpoints.size() < 2 || !std::is_sorted(breakpoints.begin(), breakpoints.end()))
        throw std::invalid_argument("integrate_adaptive: need a sorted breakpoint list");
    if (!(opt.abs_tol > 0.0) || !(opt.rel_tol > 0.0))
        throw std::invalid_argument("integrate_adaptive: tolerances must be positive");

    std::multiset<Cell, WorstFirst> cells;
    double err_sum = 0.0;
    double val_sum = 0.0;
    for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
        if (breakpoints[i] == breakpoints[i + 1]) continue;
        Cell c = evaluate_cell(f, breakpoints[i], breakpoints[i + 1]);
        err_sum += c.err;
        val_sum += c.val;
        cells.insert(c);
    }

    auto budget = [&] { return std::max(opt.abs_tol, opt.rel_tol * std::abs(val_sum)); };

    while (err_sum > budget() && static_cast<int>(cells.size()) < opt.max_cells) {
        Cell worst = *cells.begin();
        cells.erase(cells.begin());
        const double mid = 0.5 * (worst.a + worst.b);
        if (mid <= worst.a || mid >= worst.b) {
            // interval at floating-point resolution, keep as is
            cells.insert(worst);
            break;
        }
        Cell left = evaluate_cell(f, worst.a, mid);
        Cell right = evaluate_cell(f, mid, worst.b);
        err_sum += left.err + right.err - worst.err;
        val_sum += left.val + right.val - worst.val;
        cells.insert(left);
        cells.insert(right);
    }

    // Left-to-right extended-precision accumulation: the reported value does
    // not depend on the order in which cells were refined.
    std::vector<Cell> ordered(cells.begin(), cells.end());
    std::sort(ordered.begin(), ordered.end(),
              [](const Cell& l, const Cell& r) { return l.a < r.a; });
    long double v = 0.0L, e = 0.0L;
    for (const Cell& c : ordered) {
        v += c.val;
        e += c.err;
    }

    QuadratureOutcome out;
    out.value = static_cast<double>(v);
    out.error_estimate = static_cast<double>(e);
    out.cells = static_cast<int>(ordered.size());
    out.converged = out.error_estimate <= std::max(opt.abs_tol, opt.rel_tol * std::abs(out.value));
    return out;
}

} // namespace bessel
