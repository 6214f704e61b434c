#include "bessel/acceptance.hpp"

#include <cmath>
#include <cstdio>
#include <random>

#include "bessel/dimension.hpp"
#include "bessel/kernels.hpp"
#include "bessel/parallel.hpp"
#include "bessel/pathsim.hpp"
#include "bessel/semigroup.hpp"
#include "bessel/verifier.hpp"

namespace bessel {

namespace {

std::string fmt(const char* pattern, double a, double b = 0.0) {
    char buf[128];
    std::snprintf(buf, sizeof buf, pattern, a, b);
    return buf;
}

TestFunction scaled_gaussian(double lambda) {
    TestFunction F;
    F.name = fmt("exp_neg_%g_y2", lambda);
    F.f = [lambda](double y) { return std::exp(-lambda * y * y); };
    F.sup_norm = 1.0;
    return F;
}

// ---------------------------------------------------------------------------
// 1. kernel normalization
// ---------------------------------------------------------------------------

AcceptanceItem criterion_normalization() {
    AcceptanceItem item{1, "kernel mass is 1 (atom included at dimension 0)", {}, true, false};
    VerificationReport r;
    r.name = "kernel_normalization";
    r.tolerance_spec = "|mass - 1| <= 1e-10";
    r.passed = true;

    QuadratureSettings qs;
    qs.abs_tol = 1e-12;
    qs.rel_tol = 1e-12;
    const TestFunction one = make_test_function("one");
    double worst = 0.0;
    for (double delta : {0.0, 0.5, 1.0, k_delta_star, 1.5, 2.0, 3.0})
        for (double x : {0.0, 0.5, 1.0, 3.0})
            for (double T : {0.1, 1.0}) {
                const double mass =
                    apply_kernel(SemigroupQuery{BesselDim::of(delta), T, x, one, qs});
                const double err = std::abs(mass - 1.0);
                if (err > worst) {
                    worst = err;
                    r.witness = {{"delta", delta}, {"x", x}, {"T", T}, {"mass", mass}};
                }
                r.passed = r.passed && err <= 1e-10;
            }
    r.analytic = 1.0;
    r.witness["worst_abs_err"] = worst;
    r.inputs["n"] = 56;
    item.reports.push_back(std::move(r));
    item.met = item.reports.back().passed;
    return item;
}

// ---------------------------------------------------------------------------
// 2-3. dual-kernel derivative vs central differences; origin derivative
// ---------------------------------------------------------------------------

const std::vector<double> k_deriv_deltas{0.0, 0.5, 1.0, 1.5, 2.0, 3.0};
const std::vector<double> k_deriv_xs{0.25, 1.0, 2.0};
const std::vector<double> k_deriv_ts{0.25, 1.0};

std::vector<TestFunction> derivative_family() {
    return {make_test_function("exp_neg_y2"), make_test_function("cauchy"),
            make_test_function("indicator_0_a", 1.0)};
}

AcceptanceItem criterion_derivative_vs_fd() {
    AcceptanceItem item{2, "dual-kernel derivative matches central differences", {}, true, false};
    VerificationReport r;
    r.name = "derivative_vs_fd";
    r.tolerance_spec = "relative error <= 1e-6 at h = 1e-4";
    r.passed = true;

    QuadratureSettings qs;
    qs.abs_tol = 1e-13;
    qs.rel_tol = 1e-13;
    double worst = 0.0;
    for (const TestFunction& F : derivative_family())
        for (double delta : k_deriv_deltas)
            for (double x : k_deriv_xs)
                for (double T : k_deriv_ts) {
                    const SemigroupQuery q{BesselDim::of(delta), T, x, F, qs};
                    const double an = derivative_semigroup(q);
                    const double fd = fd_derivative(q, 1e-4);
                    const double rel = std::abs(an - fd) / std::max(std::abs(an), 1e-12);
                    if (rel > worst) {
                        worst = rel;
                        r.witness = {{"delta", delta}, {"x", x},  {"T", T},
                                     {"analytic", an}, {"fd", fd}};
                    }
                    r.passed = r.passed && rel <= 1e-6;
                }
    r.witness["worst_rel_err"] = worst;
    r.inputs["n"] = 108;
    item.reports.push_back(std::move(r));
    item.met = item.reports.back().passed;
    return item;
}

AcceptanceItem criterion_origin_derivative() {
    AcceptanceItem item{3, "derivative vanishes identically at the origin", {}, true, false};
    VerificationReport r;
    r.name = "origin_derivative_zero";
    r.tolerance_spec = "exactly 0.0 at x = 0";
    r.passed = true;
    QuadratureSettings qs;
    for (const TestFunction& F : derivative_family())
        for (double delta : k_deriv_deltas)
            for (double T : k_deriv_ts) {
                const double d = derivative_semigroup(SemigroupQuery{BesselDim::of(delta), T,
                                                                     0.0, F, qs});
                if (d != 0.0) {
                    r.passed = false;
                    r.witness = {{"delta", delta}, {"T", T}, {"value", d}};
                }
            }
    r.analytic = 0.0;
    r.inputs["n"] = 36;
    item.reports.push_back(std::move(r));
    item.met = item.reports.back().passed;
    return item;
}

// ---------------------------------------------------------------------------
// 4. Laplace transform cross-check
// ---------------------------------------------------------------------------

AcceptanceItem criterion_laplace() {
    AcceptanceItem item{4, "kernel quadrature reproduces the Laplace transform", {}, true, false};
    VerificationReport r;
    r.name = "laplace_crosscheck";
    r.tolerance_spec = "|quadrature - closed form| <= 1e-8";
    r.passed = true;

    QuadratureSettings qs;
    qs.abs_tol = 1e-12;
    qs.rel_tol = 1e-12;
    double worst = 0.0;
    for (double lambda : {0.5, 1.0, 2.0}) {
        const TestFunction F = scaled_gaussian(lambda);
        for (double delta : {0.0, 0.5, 1.0, k_delta_star, 1.5, 2.0, 3.0})
            for (double x : {0.0, 0.5, 1.0, 3.0})
                for (double T : {0.1, 1.0}) {
                    const double quad =
                        apply_kernel(SemigroupQuery{BesselDim::of(delta), T, x, F, qs});
                    const double closed = sq_bessel_laplace(delta, T, x * x, lambda);
                    const double err = std::abs(quad - closed);
                    if (err > worst) {
                        worst = err;
                        r.witness = {{"delta", delta}, {"x", x},        {"T", T},
                                     {"lambda", lambda}, {"quadrature", quad},
                                     {"closed_form", closed}};
                    }
                    r.passed = r.passed && err <= 1e-8;
                }
    }
    r.witness["worst_abs_err"] = worst;
    r.inputs["n"] = 168;
    item.reports.push_back(std::move(r));
    item.met = item.reports.back().passed;
    return item;
}

// ---------------------------------------------------------------------------
// 5. exact endpoint sampler
// ---------------------------------------------------------------------------

AcceptanceItem criterion_sampler(const AcceptanceOptions& opt) {
    AcceptanceItem item{5, "exact endpoint sampler matches Laplace transform and atom", {}, true,
                        false};
    const double z0 = 1.0, T = 1.0;
    const std::size_t n = 100000;
    int channel = 0;
    for (double delta : {0.0, 0.5, 1.0, 2.0, 3.0}) {
        const std::uint64_t seed = derive_seed(opt.seed, 0x5a00 + channel++);
        std::vector<double> xs = mc_samples(n, seed, opt.workers,
                                            [&](std::size_t, Xoshiro256pp& rng) {
                                                return sample_exact_endpoint(delta, z0, T, rng);
                                            });
        VerificationReport r;
        r.name = fmt("endpoint_sampler_delta_%g", delta);
        r.inputs = {{"delta", delta}, {"x", std::sqrt(z0)}, {"T", T},
                    {"n", static_cast<double>(n)}};
        r.tolerance_spec = "3 se per probe (Laplace at 0.5 and 1, mean, atom at dim 0)";
        r.passed = true;

        for (double lambda : {0.5, 1.0}) {
            std::vector<double> tv(n);
            for (std::size_t i = 0; i < n; ++i) tv[i] = std::exp(-lambda * xs[i]);
            const McEstimate est = mc_from_samples(tv, seed);
            const double target = sq_bessel_laplace(delta, T, z0, lambda);
            r.witness[fmt("laplace_%g_gap_se", lambda)] =
                std::abs(est.mean - target) / est.std_error;
            r.passed = r.passed && std::abs(est.mean - target) <= 3.0 * est.std_error;
        }
        {
            const McEstimate est = mc_from_samples(xs, seed);
            const double target = z0 + delta * T;
            r.witness["mean_gap_se"] = std::abs(est.mean - target) / est.std_error;
            r.passed = r.passed && std::abs(est.mean - target) <= 3.0 * est.std_error;
        }
        if (delta == 0.0) {
            std::size_t zeros = 0;
            for (double v : xs)
                if (v == 0.0) ++zeros;
            const double p = std::exp(-z0 / (2.0 * T));
            const double phat = static_cast<double>(zeros) / n;
            const double se = std::sqrt(p * (1.0 - p) / n);
            r.analytic = p;
            r.witness["atom_empirical"] = phat;
            r.witness["atom_gap_se"] = std::abs(phat - p) / se;
            r.passed = r.passed && std::abs(phat - p) <= 3.0 * se;
        }
        item.met = item.met && r.passed;
        item.reports.push_back(std::move(r));
    }
    return item;
}

// ---------------------------------------------------------------------------
// 6-11, 13-15: path-scheme statistics
// ---------------------------------------------------------------------------

AcceptanceItem criterion_martingale(const AcceptanceOptions& opt) {
    AcceptanceItem item{6, "D is a martingale: E[D_t] = x on the checkpoint grid", {}, true,
                        false};
    int channel = 0;
    for (double delta : {0.5, 1.0, 2.0}) {
        SamplerConfig cfg;
        cfg.dt = 1e-4;
        cfg.seed = opt.seed;
        cfg.stream_id = 0x600 + channel++;
        VerificationReport r =
            martingale_check(delta, 1.0, {0.25, 0.5, 1.0}, 100000, cfg, opt.workers);
        item.met = item.met && r.passed;
        item.reports.push_back(std::move(r));
    }
    return item;
}

AcceptanceItem criterion_bel(const AcceptanceOptions& opt) {
    AcceptanceItem item{7, "pathwise gradient agrees with the dual-kernel derivative", {}, true,
                        false};
    QuadratureSettings qs;
    const std::vector<TestFunction> fs{make_test_function("exp_neg_y2"),
                                       make_test_function("indicator_0_a", 1.0)};
    int channel = 0;
    for (double delta : {1.0, 1.5, 2.0, 3.0, 0.9, k_delta_star}) {
        const bool mom = delta < 1.0;
        for (const TestFunction& F : fs)
            for (double T : {0.5, 1.0}) {
                SamplerConfig cfg;
                cfg.dt = 1e-3;
                cfg.seed = opt.seed;
                cfg.stream_id = 0x700 + channel++;
                VerificationReport r = bel_agreement_check(delta, F, 1.0, T, 100000, cfg, qs,
                                                           opt.workers, mom);
                r.inputs["F"] = F.jumps.empty() ? 0.0 : 1.0;
                item.met = item.met && r.passed;
                item.reports.push_back(std::move(r));
            }
    }
    return item;
}

AcceptanceItem criterion_reweight(const AcceptanceOptions& opt) {
    AcceptanceItem item{8, "change-of-dimension reweighting hits the higher-dim kernel", {}, true,
                        false};
    QuadratureSettings qs;
    struct Row {
        double d, dp, x, T, dt;
        const char* f;
    };
    // The (0,2) pair is sampled from x = 2 so that absorption by T stays
    // rare (about 2%), and the (0.5,2.5) pair uses a finer step: both carry
    // a positive A-coefficient in the weight, and the mass lost to freezing
    // paths at the clamped floor scales with the hit probability and the
    // floor, which those choices keep well inside the 3% gate.
    const std::vector<Row> rows{{0.0, 2.0, 2.0, 0.5, 1e-3, "indicator_0_a"},
                                {1.0, 3.0, 1.0, 0.5, 1e-3, "exp_neg_y2"},
                                {0.5, 2.5, 1.0, 0.5, 2.5e-4, "exp_neg_y2"},
                                {1.0, 4.0, 1.0, 0.5, 1e-3, "exp_neg_y2"}};
    int channel = 0;
    for (const Row& row : rows) {
        SamplerConfig cfg;
        cfg.dt = row.dt;
        cfg.seed = opt.seed;
        cfg.stream_id = 0x800 + channel++;
        VerificationReport r = rn_identity_check(row.d, row.dp, row.x, row.T,
                                                 make_test_function(row.f, 1.0), 100000, cfg, qs,
                                                 opt.workers);
        item.met = item.met && r.passed;
        item.reports.push_back(std::move(r));
    }
    return item;
}

AcceptanceItem criterion_ito_identity(const AcceptanceOptions& opt) {
    AcceptanceItem item{9, "left-point sum converges to D_T - x at the Euler rate", {}, true,
                        false};
    int channel = 0;
    for (double delta : {1.0, 2.0}) {
        SamplerConfig cfg;
        cfg.seed = opt.seed;
        cfg.stream_id = 0x900 + channel++;
        VerificationReport r = stochastic_integral_convergence(
            delta, 1.0, 1.0, {1e-2, 1e-3, 1e-4}, 1000, cfg, opt.workers);
        item.met = item.met && r.passed;
        item.reports.push_back(std::move(r));
    }
    return item;
}

AcceptanceItem criterion_blowup(const AcceptanceOptions& opt) {
    AcceptanceItem item{10, "absorption functionals: A blows up, D dies, eta splits at dim 1",
                        {}, true, false};
    int channel = 0;
    for (double delta : {0.0, 0.5, 1.0, 1.5}) {
        SamplerConfig cfg;
        cfg.dt = 1e-3; // cap; each floor refines to floor^2/4
        cfg.seed = opt.seed;
        cfg.stream_id = 0xa00 + channel++;
        VerificationReport r = eta_blowup_check(delta, 0.04, 0.08, 250, {1e-2, 1e-3, 1e-4}, cfg,
                                                opt.workers);
        item.met = item.met && r.passed;
        item.reports.push_back(std::move(r));
    }
    return item;
}

AcceptanceItem criterion_tail_index(const AcceptanceOptions& opt) {
    AcceptanceItem item{11, "tail index of D matches the critical integrability order", {}, true,
                        false};
    int channel = 0;
    for (double delta : {0.5, k_delta_star}) {
        const double p = BesselDim::of(delta).p_threshold;
        SamplerConfig cfg;
        cfg.dt = 2.5e-4;
        cfg.seed = opt.seed;
        cfg.stream_id = 0xb00 + channel++;
        VerificationReport r = moment_tail_diagnostics(delta, 1.0, 1.0, 1000000,
                                                       {0.75 * p, 1.5 * p}, cfg, opt.workers);
        if (r.inconclusive && !r.passed) item.soft = true;
        item.met = item.met && (r.passed || r.inconclusive);
        item.reports.push_back(std::move(r));
    }
    return item;
}

AcceptanceItem criterion_feller(const AcceptanceOptions& opt) {
    (void)opt;
    AcceptanceItem item{12, "uniform modulus and the T^alpha gradient plateau", {}, true, false};
    QuadratureSettings qs;
    FellerSweepConfig cfg;
    cfg.T_grid = {1.0, 0.5, 0.25, 0.125, 0.0625, 0.03125, 0.015625};
    cfg.family = derivative_family();
    for (double delta : {k_delta_star, 1.0, 2.0}) {
        VerificationReport r = strong_feller_sweep(BesselDim::of(delta), cfg, qs);
        item.met = item.met && r.passed;
        item.reports.push_back(std::move(r));
    }
    return item;
}

AcceptanceItem criterion_coupling(const AcceptanceOptions& opt) {
    AcceptanceItem item{13, "coupled flow: order kept, coalescence, derivative ratio", {}, true,
                        false};
    VerificationReport r;
    r.name = "coupled_flow_battery";
    r.tolerance_spec =
        "0 violations over 100 seeds x 2 dims; post-floor gap <= floor; FD ratio within 5%";
    r.passed = true;

    // (a) ordering and coalescence, 100 seeds at dims 0.5 and 1.5
    std::size_t violations = 0, subscale = 0, coalesced = 0, meets = 0;
    double max_floor_gap = 0.0, max_meet_gap = 0.0;
    for (double delta : {0.5, 1.5})
        for (std::uint64_t s = 0; s < 100; ++s) {
            SamplerConfig cfg;
            cfg.dt = 1e-3;
            cfg.seed = derive_seed(opt.seed, 0xc0de + s);
            Xoshiro256pp rng = make_stream_rng(cfg.seed, delta < 1.0 ? 1 : 2);
            const CoupledFlow cf = coupled_flow(delta, 0.3, 0.3 + 1e-4, 1.0, cfg, rng);
            violations += cf.violations;
            subscale += cf.subscale_flips;
            if (cf.first_floor_pair_index != k_never) {
                ++coalesced;
                max_floor_gap = std::max(max_floor_gap, cf.post_floor_max_gap);
            }
            if (cf.meet_index != k_never) {
                ++meets;
                max_meet_gap = std::max(max_meet_gap, cf.post_meet_max_gap);
            }
        }
    r.witness["violations"] = static_cast<double>(violations);
    r.witness["subscale_flips"] = static_cast<double>(subscale);
    r.witness["coalesced_runs"] = static_cast<double>(coalesced);
    r.witness["post_floor_max_gap"] = max_floor_gap;
    r.witness["meet_runs"] = static_cast<double>(meets);
    r.witness["post_meet_max_gap"] = max_meet_gap;
    r.passed = r.passed && violations == 0;
    r.passed = r.passed && coalesced > 0 && max_floor_gap <= 1e-6;

    // (b) averaged finite-difference ratio vs eta at dim 0.5, t near a third
    // of the typical absorption time of a unit start, alive paths only. The
    // absorption threshold sits at the step-resolvable scale 1.7 sqrt(c dt),
    // c = (1-delta)/2: comparing against eta only makes sense on paths whose
    // trapezoid A-increments stayed resolved (below that scale one step adds
    // hundreds to A and eta is a grid artifact, not a flow derivative).
    const double t_eval = 0.33, gap0 = 1e-4;
    const std::size_t n_fd = 1000;
    std::vector<double> fd(n_fd), eta(n_fd);
    std::vector<unsigned char> alive(n_fd, 0);
    parallel_for(n_fd, opt.workers, [&](std::size_t i) {
        SamplerConfig cfg;
        cfg.dt = 1e-4;
        cfg.rho_floor = 1.7 * std::sqrt(0.25 * cfg.dt);
        cfg.seed = derive_seed(opt.seed, 0xfd00);
        Xoshiro256pp rng = make_stream_rng(cfg.seed, i);
        const CoupledFlow cf = coupled_flow(0.5, 1.0, 1.0 + gap0, t_eval, cfg, rng);
        if (cf.path_x.absorbed()) return;
        alive[i] = 1;
        const std::size_t N = cf.path_x.rho.size() - 1;
        fd[i] = (cf.path_y.rho[N] - cf.path_x.rho[N]) / gap0;
        eta[i] = cf.path_x.eta[N];
    });
    long double fd_sum = 0.0L, eta_sum = 0.0L;
    std::size_t n_alive = 0;
    for (std::size_t i = 0; i < n_fd; ++i) {
        if (!alive[i]) continue;
        ++n_alive;
        fd_sum += fd[i];
        eta_sum += eta[i];
    }
    const double fd_mean = static_cast<double>(fd_sum) / n_alive;
    const double eta_mean = static_cast<double>(eta_sum) / n_alive;
    const double rel = std::abs(fd_mean - eta_mean) / eta_mean;
    r.witness["fd_mean"] = fd_mean;
    r.witness["eta_mean"] = eta_mean;
    r.witness["fd_vs_eta_rel"] = rel;
    r.witness["fd_alive_paths"] = static_cast<double>(n_alive);
    r.passed = r.passed && rel <= 0.05;

    r.inputs = {{"delta", 0.5}, {"x", 0.3}, {"T", 1.0}, {"n", 200}, {"dt", 1e-3}};
    item.met = r.passed;
    item.reports.push_back(std::move(r));
    return item;
}

AcceptanceItem criterion_scaling(const AcceptanceOptions& opt) {
    AcceptanceItem item{14, "quadratic scaling of the absorption time; dim-0 absorption law",
                        {}, true, false};
    int channel = 0;
    for (double delta : {0.5, 1.0})
        for (double y : {0.5, 2.0}) {
            SamplerConfig cfg;
            cfg.dt = 1e-3;
            cfg.seed = opt.seed;
            cfg.stream_id = 0xe00 + 2 * channel;
            ++channel;
            VerificationReport r = scaling_check_report(delta, y, 10000, cfg, opt.workers);
            item.met = item.met && r.passed;
            item.reports.push_back(std::move(r));
        }
    {
        SamplerConfig cfg;
        cfg.dt = 2.5e-4;
        cfg.seed = opt.seed;
        cfg.stream_id = 0xeff;
        VerificationReport r = absorption_cdf_check({0.5, 1.0, 2.0, 5.0}, 10000, cfg,
                                                    opt.workers);
        item.met = item.met && r.passed;
        item.reports.push_back(std::move(r));
    }
    return item;
}

AcceptanceItem criterion_baseline(const AcceptanceOptions& opt) {
    AcceptanceItem item{15, "dissipative baseline: pathwise gradient and modulus bound", {}, true,
                        false};
    TestFunction tanh_f;
    tanh_f.name = "tanh";
    tanh_f.f = [](double y) { return std::tanh(y); };
    tanh_f.sup_norm = 1.0;
    VerificationReport r = classical_baseline(1.0, tanh_f, 0.0, 1.0, 100000, 1e-3,
                                              derive_seed(opt.seed, 0xf00), opt.workers);
    item.met = r.passed;
    item.reports.push_back(std::move(r));
    return item;
}

} // namespace

std::vector<AcceptanceItem> run_acceptance(const AcceptanceOptions& opt) {
    std::vector<AcceptanceItem> items;
    const auto note = [&](const AcceptanceItem& it) {
        if (opt.progress)
            opt.progress(fmt("criterion %g: ", static_cast<double>(it.criterion)) + it.title +
                         (it.met ? " ... met" : " ... NOT met"));
    };
    const auto push = [&](AcceptanceItem it) {
        note(it);
        items.push_back(std::move(it));
    };
    push(criterion_normalization());
    push(criterion_derivative_vs_fd());
    push(criterion_origin_derivative());
    push(criterion_laplace());
    push(criterion_sampler(opt));
    push(criterion_martingale(opt));
    push(criterion_bel(opt));
    push(criterion_reweight(opt));
    push(criterion_ito_identity(opt));
    push(criterion_blowup(opt));
    push(criterion_tail_index(opt));
    push(criterion_feller(opt));
    push(criterion_coupling(opt));
    push(criterion_scaling(opt));
    push(criterion_baseline(opt));
    return items;
}

std::vector<VerificationReport> flatten_reports(const std::vector<AcceptanceItem>& items) {
    std::vector<VerificationReport> out;
    for (const AcceptanceItem& it : items)
        for (const VerificationReport& r : it.reports) out.push_back(r);
    return out;
}

bool all_met(const std::vector<AcceptanceItem>& items) {
    for (const AcceptanceItem& it : items)
        if (!it.met) return false;
    return true;
}

} // namespace bessel
