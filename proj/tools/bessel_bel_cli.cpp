// =============================================================================
// bessel_bel command-line front end
// =============================================================================
//
// Dispatches to the kernel/semigroup evaluators, the path sampler and the
// verification sweeps, and writes VerificationReport files.  All randomized
// commands honour --seed (default: BESSEL_BEL_SEED, then 42) and --workers
// (default: logical CPU count; results are independent of the cap).  A JSON
// config file may supply any flag; explicit command-line flags win.
// Progress goes to standard error, data to standard output / --out.

#include <cinttypes>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "bessel/acceptance.hpp"
#include "bessel/dimension.hpp"
#include "bessel/kernels.hpp"
#include "bessel/report.hpp"
#include "bessel/semigroup.hpp"
#include "bessel/test_functions.hpp"
#include "bessel/verifier.hpp"

namespace {

// CLI11 ships an INI reader; this adapter accepts {"flag": value} JSON with
// one nested object per subcommand, so sweep configs can be versioned.
class JsonConfig : public CLI::Config {
  public:
    std::string to_config(const CLI::App* app, bool default_also, bool, std::string) const override {
        nlohmann::json j;
        for (const CLI::Option* opt : app->get_options({})) {
            if (!opt->get_lnames().empty() && opt->get_configurable()) {
                const std::string name = opt->get_lnames()[0];
                if (opt->count() == 1)
                    j[name] = opt->results().at(0);
                else if (opt->count() > 1)
                    j[name] = opt->results();
                else if (default_also && !opt->get_default_str().empty())
                    j[name] = opt->get_default_str();
            }
        }
        for (const CLI::App* sub : app->get_subcommands({}))
            j[sub->get_name()] =
                nlohmann::json::parse(to_config(sub, default_also, false, ""));
        return j.dump(2);
    }

    std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
        nlohmann::json j;
        input >> j;
        return decode(j, "", {});
    }

  private:
    std::vector<CLI::ConfigItem> decode(const nlohmann::json& j, const std::string& name,
                                        std::vector<std::string> prefix) const {
        std::vector<CLI::ConfigItem> out;
        if (j.is_object()) {
            if (!name.empty()) prefix.push_back(name);
            for (auto it = j.begin(); it != j.end(); ++it) {
                auto sub = decode(it.value(), it.key(), prefix);
                out.insert(out.end(), sub.begin(), sub.end());
            }
            return out;
        }
        if (name.empty())
            throw CLI::ConversionError("top level JSON config entries must be objects");
        CLI::ConfigItem item;
        item.name = name;
        item.parents = std::move(prefix);
        const auto scalar = [](const nlohmann::json& v) -> std::string {
            if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
            if (v.is_string()) return v.get<std::string>();
            if (v.is_number()) {
                std::ostringstream ss;
                ss.precision(17);
                ss << v.get<double>();
                return ss.str();
            }
            throw CLI::ConversionError("unsupported JSON value type in config");
        };
        if (j.is_array())
            for (const auto& v : j) item.inputs.push_back(scalar(v));
        else
            item.inputs.push_back(scalar(j));
        out.push_back(std::move(item));
        return out;
    }
};

struct SharedArgs {
    std::uint64_t seed = 42;
    bool seed_given = false;
    int workers = 0;
    std::string out_path;
    std::string format = "csv";
};

void add_shared(CLI::App* sub, SharedArgs& shared) {
    // the BESSEL_BEL_SEED fallback is applied manually in finalize_seed so that
    // config files outrank the environment
    sub->add_option("--seed", shared.seed, "RNG seed (unsigned 64-bit; default from BESSEL_BEL_SEED, then 42)")
        ->each([&](const std::string&) { shared.seed_given = true; });
    sub->add_option("--workers", shared.workers,
                    "worker-thread cap, 0 = logical CPU count (integer >= 0); results do not depend on it")
        ->check(CLI::NonNegativeNumber);
    sub->add_option("--out", shared.out_path, "report file path (written in --format)");
    sub->add_option("--format", shared.format, "report file format")
        ->check(CLI::IsMember({"csv", "jsonl"}));
    sub->fallthrough();
    sub->configurable();
}

void finalize_seed(SharedArgs& shared) {
    if (shared.seed_given) return;
    if (const char* env = std::getenv("BESSEL_BEL_SEED")) {
        char* end = nullptr;
        const unsigned long long v = std::strtoull(env, &end, 10);
        if (end && *end == '\0') shared.seed = v;
    }
}

void write_reports(const SharedArgs& shared, const std::vector<bessel::VerificationReport>& reports) {
    if (shared.out_path.empty()) return;
    std::ofstream os(shared.out_path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open out path: " + shared.out_path);
    if (shared.format == "jsonl")
        bessel::write_report_jsonl(os, reports);
    else
        bessel::write_report_csv(os, reports);
    if (!os) throw std::runtime_error("write failed: " + shared.out_path);
}

void print_report(const bessel::VerificationReport& r) {
    std::string line = "[" + std::string(r.passed ? "pass" : (r.inconclusive ? "soft" : "FAIL")) +
                       "] " + r.name;
    if (r.analytic) line += "  analytic=" + bessel::format_double(*r.analytic);
    if (r.oracle) line += "  oracle=" + bessel::format_double(*r.oracle);
    if (r.mc)
        line += "  mc=" + bessel::format_double(r.mc->mean) + " +- " +
                bessel::format_double(r.mc->std_error);
    if (!r.note.empty()) line += "  (" + r.note + ")";
    std::puts(line.c_str());
}

int finish(const SharedArgs& shared, const std::vector<bessel::VerificationReport>& reports) {
    for (const auto& r : reports) print_report(r);
    write_reports(shared, reports);
    return bessel::exit_code_for(reports);
}

bessel::TestFunction resolve_test_function(const std::string& name, double a) {
    if (name == "tanh") {
        bessel::TestFunction F;
        F.name = "tanh";
        F.f = [](double y) { return std::tanh(y); };
        F.sup_norm = 1.0;
        return F;
    }
    return bessel::make_test_function(name, a);
}

std::string function_domain_help() {
    std::string s = "test function, one of {";
    bool first = true;
    for (const std::string& n : bessel::test_function_names()) {
        if (!first) s += ", ";
        s += n;
        first = false;
    }
    return s + "}";
}

} // namespace

int main(int argc, char** argv) {
    using namespace bessel;

    CLI::App app{"Bessel semigroup derivative identity: analytic kernels, exact sampling,\n"
                 "pathwise derivative flows and Monte-Carlo verification sweeps."};
    app.require_subcommand(1);
    app.config_formatter(std::make_shared<JsonConfig>());
    app.set_config("--config", "", "JSON config file; explicit command-line flags override it");
    app.fallthrough();

    SharedArgs shared;

    // ---- density ------------------------------------------------------------
    double delta = 1.0, x = 1.0, y = 1.0, T = 1.0, a = 1.0, h = 1e-4, dt = 1e-3;
    double delta_prime = 3.0, theta = 1.0, yscale = 2.0, rel_tol = 0.02, tail_fraction = 0.01;
    std::size_t n = 0;
    bool median_of_means = false;
    std::string fname = "exp_neg_y2";
    std::vector<double> t_grid{0.25, 0.5, 1.0};
    std::vector<double> p_list;
    std::vector<double> floors{1e-2, 1e-3, 1e-4};
    std::vector<double> s_grid{0.5, 1.0, 2.0, 5.0};

    CLI::App* c_density = app.add_subcommand(
        "density", "evaluate the transition kernel at (x, y); dimension 0 prints the atom too");
    c_density->add_option("--delta", delta, "dimension (real >= 0)")->check(CLI::NonNegativeNumber);
    c_density->add_option("--x", x, "start point (real >= 0)")->check(CLI::NonNegativeNumber);
    c_density->add_option("--y", y, "end point (real >= 0)")->check(CLI::NonNegativeNumber);
    c_density->add_option("--t", T, "time horizon (real > 0)")->check(CLI::PositiveNumber);
    add_shared(c_density, shared);

    CLI::App* c_semigroup = app.add_subcommand(
        "semigroup", "integrate a test function against the kernel (atom included)");
    c_semigroup->add_option("--delta", delta, "dimension (real >= 0)")->check(CLI::NonNegativeNumber);
    c_semigroup->add_option("--x", x, "start point (real >= 0)")->check(CLI::NonNegativeNumber);
    c_semigroup->add_option("--t", T, "time horizon (real > 0)")->check(CLI::PositiveNumber);
    c_semigroup->add_option("--f", fname, function_domain_help());
    c_semigroup->add_option("--a", a, "parameter of indicator_0_a (real > 0)")->check(CLI::PositiveNumber);
    add_shared(c_semigroup, shared);

    CLI::App* c_derivative = app.add_subcommand(
        "derivative",
        "space derivative of the semigroup: analytic dual-kernel value, central difference, and\n"
        "with --n a Monte-Carlo pathwise estimate; exit 0 when all agree");
    // --h (the finite-difference step) would collide with the short help flag
    c_derivative->set_help_flag("--help", "print this help message and exit");
    c_derivative->add_option("--delta", delta, "dimension (real >= 0; > 0 if --n is used)")
        ->check(CLI::NonNegativeNumber);
    c_derivative->add_option("--x", x, "start point (real >= 0)")->check(CLI::NonNegativeNumber);
    c_derivative->add_option("--t", T, "time horizon (real > 0)")->check(CLI::PositiveNumber);
    c_derivative->add_option("--f", fname, function_domain_help());
    c_derivative->add_option("--a", a, "parameter of indicator_0_a (real > 0)")->check(CLI::PositiveNumber);
    c_derivative->add_option("--h", h, "finite-difference step (real > 0)")->check(CLI::PositiveNumber);
    c_derivative->add_option("--n", n, "Monte-Carlo paths (0 = skip the pathwise estimate)");
    c_derivative->add_option("--dt", dt, "Euler step for the pathwise estimate (real > 0)")
        ->check(CLI::PositiveNumber);
    add_shared(c_derivative, shared);

    CLI::App* c_belmc = app.add_subcommand(
        "bel-mc", "pathwise Monte-Carlo gradient vs the analytic dual-kernel derivative");
    c_belmc->add_option("--delta", delta, "dimension (real > 0)")->check(CLI::PositiveNumber);
    c_belmc->add_option("--x", x, "start point (real > 0)")->check(CLI::PositiveNumber);
    c_belmc->add_option("--t", T, "time horizon (real > 0)")->check(CLI::PositiveNumber);
    c_belmc->add_option("--f", fname, function_domain_help());
    c_belmc->add_option("--a", a, "parameter of indicator_0_a (real > 0)")->check(CLI::PositiveNumber);
    c_belmc->add_option("--n", n, "Monte-Carlo paths (>= 1)")->check(CLI::PositiveNumber);
    c_belmc->add_option("--dt", dt, "Euler step (real > 0)")->check(CLI::PositiveNumber);
    c_belmc->add_option("--rel-tol", rel_tol, "relative tolerance on top of 3 se (real > 0)")
        ->check(CLI::PositiveNumber);
    c_belmc->add_flag("--median-of-means", median_of_means,
                      "use a 31-block median-of-means estimator (heavy-tailed weights)");
    add_shared(c_belmc, shared);

    CLI::App* c_rn = app.add_subcommand(
        "rn-check", "change-of-dimension reweighting against the higher-dimension kernel");
    c_rn->add_option("--delta", delta, "source dimension (real >= 0)")->check(CLI::NonNegativeNumber);
    c_rn->add_option("--delta-prime", delta_prime, "target dimension (>= max(delta, 2))");
    c_rn->add_option("--x", x, "start point (real > 0)")->check(CLI::PositiveNumber);
    c_rn->add_option("--t", T, "time horizon (real > 0)")->check(CLI::PositiveNumber);
    c_rn->add_option("--f", fname, function_domain_help());
    c_rn->add_option("--a", a, "parameter of indicator_0_a (real > 0)")->check(CLI::PositiveNumber);
    c_rn->add_option("--n", n, "Monte-Carlo paths (>= 1)")->check(CLI::PositiveNumber);
    c_rn->add_option("--dt", dt, "Euler step (real > 0)")->check(CLI::PositiveNumber);
    c_rn->add_option("--rel-tol", rel_tol, "relative tolerance on top of 3 se (real > 0)")
        ->check(CLI::PositiveNumber);
    add_shared(c_rn, shared);

    CLI::App* c_mart = app.add_subcommand(
        "martingale", "E[D_t] = x on a checkpoint grid, 3 standard errors per point");
    c_mart->add_option("--delta", delta, "dimension (real >= 0)")->check(CLI::NonNegativeNumber);
    c_mart->add_option("--x", x, "start point (real > 0)")->check(CLI::PositiveNumber);
    c_mart->add_option("--t-grid", t_grid, "checkpoint times (positive, increasing)")->expected(-1);
    c_mart->add_option("--n", n, "Monte-Carlo paths (>= 1)")->check(CLI::PositiveNumber);
    c_mart->add_option("--dt", dt, "Euler step (real > 0)")->check(CLI::PositiveNumber);
    add_shared(c_mart, shared);

    CLI::App* c_moments = app.add_subcommand(
        "moments", "moment stability and Hill tail index of the terminal martingale D_T");
    c_moments->add_option("--delta", delta, "dimension (real in [0, 1))")
        ->check(CLI::Range(0.0, 1.0));
    c_moments->add_option("--x", x, "start point (real > 0)")->check(CLI::PositiveNumber);
    c_moments->add_option("--t", T, "time horizon (real > 0)")->check(CLI::PositiveNumber);
    c_moments->add_option("--n", n, "Monte-Carlo paths (>= 1)")->check(CLI::PositiveNumber);
    c_moments->add_option("--p-list", p_list,
                          "moment orders to probe (default: 0.75 and 1.5 times the critical order)")
        ->expected(-1);
    c_moments->add_option("--tail-fraction", tail_fraction, "Hill exceedance fraction (0 < f < 1)")
        ->check(CLI::Range(1e-6, 0.5));
    c_moments->add_option("--dt", dt, "Euler step (real > 0)")->check(CLI::PositiveNumber);
    add_shared(c_moments, shared);

    CLI::App* c_flow = app.add_subcommand(
        "flow", "derivative-flow functionals at absorption across a shrinking floor grid");
    c_flow->add_option("--delta", delta, "dimension (real in [0, 2))")->check(CLI::Range(0.0, 2.0));
    c_flow->add_option("--x", x, "start point (real > 0, above every floor)")->check(CLI::PositiveNumber);
    c_flow->add_option("--t", T, "time horizon (real > 0)")->check(CLI::PositiveNumber);
    c_flow->add_option("--n", n, "paths per floor (>= 1)")->check(CLI::PositiveNumber);
    c_flow->add_option("--floors", floors, "decreasing positive floor grid")->expected(-1);
    c_flow->add_option("--dt", dt, "Euler step cap; refined to floor^2/4 per floor (real > 0)")
        ->check(CLI::PositiveNumber);
    add_shared(c_flow, shared);

    CLI::App* c_scaling = app.add_subcommand(
        "scaling", "quadratic space-time scaling of the absorption time; with --delta 0, the\n"
                   "closed-form absorption law instead");
    c_scaling->add_option("--delta", delta, "dimension (real in [0, 2))")->check(CLI::Range(0.0, 2.0));
    c_scaling->add_option("--y", yscale, "start point of the rescaled run (real > 0)")
        ->check(CLI::PositiveNumber);
    c_scaling->add_option("--n", n, "paths per sample (>= 1)")->check(CLI::PositiveNumber);
    c_scaling->add_option("--s-grid", s_grid, "time grid for the dimension-0 absorption law")
        ->expected(-1);
    c_scaling->add_option("--dt", dt, "Euler step at the unit start (real > 0)")
        ->check(CLI::PositiveNumber);
    add_shared(c_scaling, shared);

    CLI::App* c_baseline = app.add_subcommand(
        "baseline", "dissipative linear-drift baseline: pathwise gradient and modulus bound");
    c_baseline->add_option("--theta", theta, "drift rate (real > 0)")->check(CLI::PositiveNumber);
    c_baseline->add_option("--x", x, "start point (real)");
    c_baseline->add_option("--t", T, "time horizon (real > 0)")->check(CLI::PositiveNumber);
    c_baseline->add_option("--f", fname, function_domain_help() + " or tanh");
    c_baseline->add_option("--a", a, "parameter of indicator_0_a (real > 0)")->check(CLI::PositiveNumber);
    c_baseline->add_option("--n", n, "Monte-Carlo paths (>= 1)")->check(CLI::PositiveNumber);
    c_baseline->add_option("--dt", dt, "Euler step (real > 0)")->check(CLI::PositiveNumber);
    add_shared(c_baseline, shared);

    CLI::App* c_full = app.add_subcommand(
        "full-suite", "run the complete acceptance matrix and print one line per criterion");
    add_shared(c_full, shared);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }
    finalize_seed(shared);

    try {
        if (*c_density) {
            const BesselDim dim = BesselDim::of(delta);
            if (delta == 0.0) {
                const Delta0Kernel k = kernel_atom_delta0(T, x);
                std::printf("atom %s\n", format_double(k.atom).c_str());
                std::printf("density %s\n", format_double(k.density(y)).c_str());
            } else {
                std::printf("%s\n", format_double(transition_density({dim, T, x, y})).c_str());
            }
            return 0;
        }
        if (*c_semigroup) {
            QuadratureSettings qs;
            const double v = apply_kernel(
                SemigroupQuery{BesselDim::of(delta), T, x, resolve_test_function(fname, a), qs});
            std::printf("%s\n", format_double(v).c_str());
            return 0;
        }
        if (*c_derivative) {
            QuadratureSettings qs;
            const SemigroupQuery q{BesselDim::of(delta), T, x, resolve_test_function(fname, a), qs};
            const double an = derivative_semigroup(q);
            const double fd = fd_derivative(q, h);
            std::printf("analytic %s\n", format_double(an).c_str());
            std::printf("fd       %s\n", format_double(fd).c_str());

            VerificationReport r;
            r.name = "derivative_triple_agreement";
            r.inputs = {{"delta", delta}, {"x", x}, {"T", T},
                        {"n", static_cast<double>(n)}, {"dt", dt}};
            r.analytic = an;
            r.oracle = fd;
            // central differences carry an O(h^2) truncation error; the forward
            // fallback below x = h only O(h)
            const double fd_tol =
                std::max(1e-6 * std::abs(an), (x < h ? 5.0 * h : 25.0 * h * h) / T);
            r.tolerance_spec = "|analytic - fd| <= " + format_double(fd_tol) +
                               "; mc within max(3 se, 2% + step budget)";
            r.passed = std::abs(an - fd) <= fd_tol;
            if (n > 0) {
                if (!(delta > 0.0) || !(x > 0.0))
                    throw CLI::ValidationError(
                        "derivative", "--n requires --delta > 0 and --x > 0");
                SamplerConfig cfg;
                cfg.dt = dt;
                cfg.seed = shared.seed;
                VerificationReport mc_r = bel_agreement_check(
                    delta, q.F, x, T, n, cfg, qs, shared.workers, delta < 1.0);
                std::printf("mc       %s +- %s\n", format_double(mc_r.mc->mean).c_str(),
                            format_double(mc_r.mc->std_error).c_str());
                r.mc = mc_r.mc;
                r.witness = mc_r.witness;
                r.passed = r.passed && mc_r.passed;
            }
            return finish(shared, {r});
        }
        if (*c_belmc) {
            if (n == 0) throw CLI::ValidationError("bel-mc", "--n is required");
            SamplerConfig cfg;
            cfg.dt = dt;
            cfg.seed = shared.seed;
            QuadratureSettings qs;
            return finish(shared, {bel_agreement_check(delta, resolve_test_function(fname, a), x,
                                                       T, n, cfg, qs, shared.workers,
                                                       median_of_means, rel_tol)});
        }
        if (*c_rn) {
            if (n == 0) throw CLI::ValidationError("rn-check", "--n is required");
            SamplerConfig cfg;
            cfg.dt = dt;
            cfg.seed = shared.seed;
            QuadratureSettings qs;
            const double rt = c_rn->count("--rel-tol") ? rel_tol : 0.03;
            return finish(shared,
                          {rn_identity_check(delta, delta_prime, x, T,
                                             resolve_test_function(fname, a), n, cfg, qs,
                                             shared.workers, rt)});
        }
        if (*c_mart) {
            if (n == 0) throw CLI::ValidationError("martingale", "--n is required");
            SamplerConfig cfg;
            cfg.dt = dt;
            cfg.seed = shared.seed;
            return finish(shared,
                          {martingale_check(delta, x, t_grid, n, cfg, shared.workers)});
        }
        if (*c_moments) {
            if (n == 0) throw CLI::ValidationError("moments", "--n is required");
            if (p_list.empty()) {
                const double p = BesselDim::of(delta).p_threshold;
                p_list = {0.75 * p, 1.5 * p};
            }
            SamplerConfig cfg;
            cfg.dt = dt;
            cfg.seed = shared.seed;
            return finish(shared, {moment_tail_diagnostics(delta, x, T, n, p_list, cfg,
                                                           shared.workers, tail_fraction)});
        }
        if (*c_flow) {
            if (n == 0) throw CLI::ValidationError("flow", "--n is required");
            SamplerConfig cfg;
            cfg.dt = dt;
            cfg.seed = shared.seed;
            return finish(shared,
                          {eta_blowup_check(delta, x, T, n, floors, cfg, shared.workers)});
        }
        if (*c_scaling) {
            if (n == 0) throw CLI::ValidationError("scaling", "--n is required");
            SamplerConfig cfg;
            cfg.dt = dt;
            cfg.seed = shared.seed;
            if (delta == 0.0)
                return finish(shared, {absorption_cdf_check(s_grid, n, cfg, shared.workers)});
            return finish(shared,
                          {scaling_check_report(delta, yscale, n, cfg, shared.workers)});
        }
        if (*c_baseline) {
            if (n == 0) throw CLI::ValidationError("baseline", "--n is required");
            const TestFunction phi =
                c_baseline->count("--f") ? resolve_test_function(fname, a)
                                         : resolve_test_function("tanh", a);
            return finish(shared, {classical_baseline(theta, phi, x, T, n, dt, shared.seed,
                                                      shared.workers)});
        }
        if (*c_full) {
            AcceptanceOptions opt;
            opt.seed = shared.seed;
            opt.workers = shared.workers;
            opt.progress = [](const std::string& line) {
                std::fprintf(stderr, "%s\n", line.c_str());
            };
            const std::vector<AcceptanceItem> items = run_acceptance(opt);
            for (const AcceptanceItem& it : items)
                std::printf("criterion %2d [%s]%s %s\n", it.criterion, it.met ? "PASS" : "FAIL",
                            it.soft ? " (soft)" : "", it.title.c_str());
            const std::vector<VerificationReport> reports = flatten_reports(items);
            write_reports(shared, reports);
            return exit_code_for(reports);
        }
    } catch (const CLI::ValidationError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 1;
}
