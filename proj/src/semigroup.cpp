#include "bessel/semigroup.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace bessel {

namespace {

void validate_query(const SemigroupQuery& q) {
    q.quad.validate();
    if (!(q.T > 0.0)) throw std::invalid_argument("SemigroupQuery: T must be > 0");
    if (!(q.x >= 0.0)) throw std::invalid_argument("SemigroupQuery: x must be >= 0");
    if (!q.F.f) throw std::invalid_argument("SemigroupQuery: missing test function");
    if (!(q.F.sup_norm > 0.0)) throw std::invalid_argument("SemigroupQuery: sup norm must be > 0");
}

// Truncation point: grow Y until the certified discarded mass is well under
// the absolute tolerance.
double choose_cutoff(double delta, double T, double x, double sup_norm,
                     const QuadratureSettings& qs) {
    double Y = std::sqrt(x * x + delta * T) + qs.upper_cutoff_sigmas * std::sqrt(T);
    for (int i = 0; i < 400; ++i) {
        if (sup_norm * squared_radius_tail_bound(delta, T, x, Y) <= 0.05 * qs.abs_tol) return Y;
        Y *= 1.2;
    }
    throw QuadratureError("apply_kernel: could not certify a finite integration cutoff",
                          std::numeric_limits<double>::infinity(), qs.abs_tol);
}

} // namespace

double squared_radius_tail_bound(double delta, double T, double x, double Y) {
    // P(X_T >= Y^2) <= E exp(theta X_T) exp(-theta Y^2) with theta = beta/(2T):
    //   (1-beta)^(-delta/2) exp(beta x^2 / (2T(1-beta)) - beta Y^2 / (2T)).
    double best = 1.0;
    for (double beta : {0.5, 0.3, 0.15, 0.05, 0.01}) {
        const double expo = beta * x * x / (2.0 * T * (1.0 - beta)) - beta * Y * Y / (2.0 * T);
        const double bound = std::pow(1.0 - beta, -delta / 2.0) * std::exp(expo);
        best = std::min(best, bound);
    }
    return best;
}

double apply_kernel(const SemigroupQuery& q) {
    validate_query(q);
    const double delta = q.dim.delta;
    const double cutoff = choose_cutoff(delta, q.T, q.x, q.F.sup_norm, q.quad);

    std::vector<double> breaks = {0.0};
    if (q.x > 0.0 && q.x < cutoff) breaks.push_back(q.x);
    for (double j : q.F.jumps)
        if (j > 0.0 && j < cutoff) breaks.push_back(j);
    breaks.push_back(cutoff);
    std::sort(breaks.begin(), breaks.end());

    double atom_part = 0.0;
    double sampled_sup = 0.0;
    std::function<double(double)> integrand;

    if (delta == 0.0) {
        Delta0Kernel k = kernel_atom_delta0(q.T, q.x);
        atom_part = k.atom * q.F.f(0.0);
        integrand = [&q, k, &sampled_sup](double y) {
            const double fy = q.F.f(y);
            sampled_sup = std::max(sampled_sup, std::abs(fy));
            return fy * k.density(y);
        };
    } else {
        integrand = [&q, &sampled_sup](double y) {
            const double fy = q.F.f(y);
            sampled_sup = std::max(sampled_sup, std::abs(fy));
            DensityQuery dq{q.dim, q.T, q.x, y};
            return fy * transition_density(dq);
        };
    }

    QuadratureOptions opt;
    opt.abs_tol = 0.9 * q.quad.abs_tol;
    opt.rel_tol = q.quad.rel_tol;
    opt.max_cells = q.quad.max_cells;
    const QuadratureOutcome res = integrate_adaptive(integrand, breaks, opt);

    if (sampled_sup > q.F.sup_norm * (1.0 + 1e-12))
        throw std::invalid_argument("apply_kernel: |F| exceeded its declared sup norm (" +
                                    q.F.name + ")");

    const double value = atom_part + res.value;
    const double achieved =
        res.error_estimate + q.F.sup_norm * squared_radius_tail_bound(delta, q.T, q.x, cutoff);
    if (!res.converged || achieved > std::max(q.quad.abs_tol, q.quad.rel_tol * std::abs(value)))
        throw QuadratureError("apply_kernel: quadrature did not reach the requested tolerance",
                              achieved, q.quad.abs_tol);
    return value;
}

double derivative_semigroup(const SemigroupQuery& q) {
    validate_query(q);
    if (q.x == 0.0) return 0.0; // Neumann boundary, exact
    SemigroupQuery up = q;
    up.dim = BesselDim::of(q.dim.delta + 2.0);
    return (q.x / q.T) * (apply_kernel(up) - apply_kernel(q));
}

double fd_derivative(const SemigroupQuery& q, double h) {
    validate_query(q);
    if (!(h > 0.0)) throw std::invalid_argument("fd_derivative: h must be > 0");
    SemigroupQuery hi = q, lo = q;
    if (q.x < h) { // one-sided forward difference, O(h) bias
        hi.x = q.x + h;
        return (apply_kernel(hi) - apply_kernel(q)) / h;
    }
    hi.x = q.x + h;
    lo.x = q.x - h;
    return (apply_kernel(hi) - apply_kernel(lo)) / (2.0 * h);
}

VerificationReport strong_feller_sweep(const BesselDim& dim, const FellerSweepConfig& cfg,
                                       const QuadratureSettings& qs) {
    qs.validate();
    if (cfg.T_grid.size() < 2 ||
        !std::is_sorted(cfg.T_grid.rbegin(), cfg.T_grid.rend()) ||
        !(cfg.T_grid.back() > 0.0))
        throw std::invalid_argument("strong_feller_sweep: T grid must be positive, decreasing");
    if (!(cfg.R > 0.0) || cfg.feller_points < 3)
        throw std::invalid_argument("strong_feller_sweep: bad x-grid configuration");
    if (cfg.family.empty())
        throw std::invalid_argument("strong_feller_sweep: empty test function family");
    for (const auto& F : cfg.family)
        if (F.sup_norm > 1.0 + 1e-12)
            throw std::invalid_argument("strong_feller_sweep: family must have sup norm <= 1");

    VerificationReport rep;
    rep.name = "strong_feller_sweep";
    rep.inputs["delta"] = dim.delta;
    rep.inputs["R"] = cfg.R;
    rep.inputs["T_min"] = cfg.T_grid.back();
    rep.inputs["T_max"] = cfg.T_grid.front();
    rep.tolerance_spec = "|P_T F(x)-P_T F(y)| <= (2R/T)|x-y|; delta>=1: sup|dP|<=T^-1/2; "
                         "T^alpha G(T) max/min < 3";
    rep.passed = true;

    const double quad_slack = 4.0 * qs.abs_tol;
    double worst_margin = std::numeric_limits<double>::infinity();
    std::vector<double> talpha_g;

    for (double T : cfg.T_grid) {
        double g_of_t = 0.0;
        for (const auto& F : cfg.family) {
            // pairwise modulus on the coarse grid
            std::vector<double> pv(cfg.feller_points);
            for (int i = 0; i < cfg.feller_points; ++i) {
                const double xi = cfg.R * i / (cfg.feller_points - 1);
                pv[i] = apply_kernel({dim, T, xi, F, qs});
            }
            for (int i = 0; i < cfg.feller_points; ++i) {
                for (int j = i + 1; j < cfg.feller_points; ++j) {
                    const double xi = cfg.R * i / (cfg.feller_points - 1);
                    const double xj = cfg.R * j / (cfg.feller_points - 1);
                    const double lhs = std::abs(pv[i] - pv[j]);
                    const double rhs = (2.0 * cfg.R / T) * std::abs(xi - xj) + quad_slack;
                    const double margin = rhs - lhs;
                    if (margin < worst_margin) {
                        worst_margin = margin;
                        rep.witness["feller_worst_T"] = T;
                        rep.witness["feller_worst_x"] = xi;
                        rep.witness["feller_worst_y"] = xj;
                    }
                    if (lhs > rhs) rep.passed = false;
                }
            }

            // gradient sweep
            const bool want_gradient = dim.delta >= 1.0 || dim.delta >= k_delta_star ||
                                       cfg.exploratory;
            if (!want_gradient) continue;
            const int gn = static_cast<int>(cfg.R / cfg.gradient_grid_step) + 1;
            for (int i = 0; i < gn; ++i) {
                const double xi = std::min(cfg.R, i * cfg.gradient_grid_step);
                const double d = std::abs(derivative_semigroup({dim, T, xi, F, qs}));
                g_of_t = std::max(g_of_t, d);
                if (dim.delta >= 1.0 && d > F.sup_norm / std::sqrt(T) + quad_slack / T) {
                    rep.passed = false;
                    rep.witness["gradient_bound_violation_T"] = T;
                    rep.witness["gradient_bound_violation_x"] = xi;
                }
            }
        }
        if (dim.delta >= k_delta_star || cfg.exploratory) {
            const double alpha = dim.alpha_exponent_extrapolated();
            talpha_g.push_back(std::pow(T, alpha) * g_of_t);
            rep.witness["talpha_g_T_" + format_double(T)] = talpha_g.back();
        }
    }

    rep.witness["feller_worst_margin"] = worst_margin;
    if (!talpha_g.empty()) {
        const double mx = *std::max_element(talpha_g.begin(), talpha_g.end());
        const double mn = *std::min_element(talpha_g.begin(), talpha_g.end());
        rep.witness["talpha_g_max"] = mx;
        rep.witness["talpha_g_min"] = mn;
        rep.witness["talpha_g_ratio"] = mx / mn;
        rep.witness["fitted_C"] = mx;
        if (dim.delta >= k_delta_star && mx / mn >= 3.0) rep.passed = false;
        if (cfg.exploratory && dim.delta < k_delta_star)
            rep.note = "exploratory: extrapolated alpha below 2(sqrt2-1), recorded only";
    }
    return rep;
}

} // namespace bessel
