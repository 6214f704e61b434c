#include "bessel/pathsim.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <istream>
#include <ostream>
#include <random>
#include <stdexcept>

#include "bessel/parallel.hpp"
#include "bessel/statistics.hpp"

static_assert(std::endian::native == std::endian::little,
              "path dump format assumes a little-endian host");

namespace bessel {

void SamplerConfig::validate() const {
    if (!(dt > 0.0)) throw std::invalid_argument("SamplerConfig: dt must be > 0");
    if (!(rho_floor > 0.0)) throw std::invalid_argument("SamplerConfig: rho_floor must be > 0");
    if (scheme != Scheme::euler_sq_bessel_truncated)
        throw std::invalid_argument("SamplerConfig: unknown scheme");
}

double sample_exact_endpoint(double delta, double z0, double T, Xoshiro256pp& rng) {
    if (!(delta >= 0.0)) throw std::domain_error("sample_exact_endpoint: delta must be >= 0");
    if (!(z0 >= 0.0)) throw std::domain_error("sample_exact_endpoint: z0 must be >= 0");
    if (!(T > 0.0)) throw std::domain_error("sample_exact_endpoint: T must be > 0");

    long long n = 0;
    if (z0 > 0.0) {
        std::poisson_distribution<long long> pois(z0 / (2.0 * T));
        n = pois(rng);
    }
    const double shape = delta / 2.0 + static_cast<double>(n);
    if (shape == 0.0) return 0.0; // absorbed mass of the zero-dimension law
    std::gamma_distribution<double> gamma(shape, 2.0);
    return T * gamma(rng);
}

namespace {

// Shared stepping core so that single and coupled simulations use the exact
// same arithmetic.
struct PathBuilder {
    double delta, dt, floor;
    double X;
    BesselPath p;

    PathBuilder(double delta_, double x, double T, double floor_, std::size_t N)
        : delta(delta_), dt(T / static_cast<double>(N)), floor(floor_) {
        p.dt_eff = dt;
        p.times.resize(N + 1);
        p.rho.resize(N + 1);
        p.db.resize(N);
        p.a_vals.resize(N + 1);
        p.eta.resize(N + 1);
        p.d_vals.resize(N + 1);
        X = x * x;
        p.times[0] = 0.0;
        p.rho[0] = x;
        p.a_vals[0] = 0.0;
        if (x <= floor) p.t0_index = 0;
        p.eta[0] = p.absorbed() ? 0.0 : 1.0;
        p.d_vals[0] = p.rho[0] * p.eta[0];
    }

    void step(std::size_t k, double dB) {
        p.db[k] = dB;
        X = std::max(X + 2.0 * std::sqrt(X) * dB + delta * dt, 0.0);
        const std::size_t k1 = k + 1;
        p.times[k1] = static_cast<double>(k1) * dt;
        p.rho[k1] = std::sqrt(X);
        if (!p.absorbed()) {
            if (p.rho[k1] <= floor) {
                p.t0_index = k1;
                p.a_vals[k1] = p.a_vals[k]; // drop the sub-interval into the floor
            } else {
                const double g0 = 1.0 / (p.rho[k] * p.rho[k]);
                const double g1 = 1.0 / (p.rho[k1] * p.rho[k1]);
                p.a_vals[k1] = p.a_vals[k] + 0.5 * dt * (g0 + g1);
            }
        } else {
            p.a_vals[k1] = p.a_vals[k];
        }
        const bool alive = !p.absorbed() || k1 < p.t0_index;
        p.eta[k1] = alive ? std::exp(0.5 * (1.0 - delta) * p.a_vals[k1]) : 0.0;
        p.d_vals[k1] = p.rho[k1] * p.eta[k1];
    }
};

std::size_t step_count(double T, double dt) {
    const auto n = static_cast<std::size_t>(std::llround(T / dt));
    return std::max<std::size_t>(1, n);
}

} // namespace

BesselPath simulate_path(double delta, double x, double T, const SamplerConfig& cfg,
                         Xoshiro256pp& rng) {
    cfg.validate();
    if (!(delta >= 0.0)) throw std::domain_error("simulate_path: delta must be >= 0");
    if (!(x > 0.0)) throw std::domain_error("simulate_path: start must be > 0");
    if (!(T > 0.0)) throw std::domain_error("simulate_path: T must be > 0");

    const std::size_t N = step_count(T, cfg.dt);
    PathBuilder b(delta, x, T, cfg.rho_floor, N);
    std::normal_distribution<double> gauss(0.0, std::sqrt(b.dt));
    for (std::size_t k = 0; k < N; ++k) b.step(k, gauss(rng));
    return std::move(b.p);
}

double discrete_stochastic_integral(const BesselPath& path) {
    long double s = 0.0L;
    for (std::size_t k = 0; k < path.db.size(); ++k) s += path.eta[k] * path.db[k];
    return static_cast<double>(s);
}

CoupledFlow coupled_flow(double delta, double x, double y, double T, const SamplerConfig& cfg,
                         Xoshiro256pp& rng) {
    cfg.validate();
    if (!(x > 0.0) || !(y > x)) throw std::domain_error("coupled_flow: need 0 < x < y");
    if (!(T > 0.0)) throw std::domain_error("coupled_flow: T must be > 0");

    const std::size_t N = step_count(T, cfg.dt);
    PathBuilder bx(delta, x, T, cfg.rho_floor, N);
    PathBuilder by(delta, y, T, cfg.rho_floor, N);
    std::normal_distribution<double> gauss(0.0, std::sqrt(bx.dt));
    for (std::size_t k = 0; k < N; ++k) {
        const double dB = gauss(rng); // one draw, both paths
        bx.step(k, dB);
        by.step(k, dB);
    }

    CoupledFlow out;
    out.violation_scale = std::sqrt(delta * bx.dt) + cfg.rho_floor;
    bool inverted_prev = false;
    for (std::size_t k = 0; k <= N; ++k) {
        const double rx = bx.p.rho[k];
        const double ry = by.p.rho[k];
        const bool inverted = rx > ry * (1.0 + 1e-13) && rx > ry + 1e-300;
        if (inverted && !inverted_prev) {
            if (std::max(rx, ry) > out.violation_scale)
                ++out.violations;
            else
                ++out.subscale_flips;
        }
        inverted_prev = inverted;
        const double gap = std::abs(ry - rx);
        if (out.meet_index == k_never && gap <= cfg.rho_floor) out.meet_index = k;
        if (out.meet_index != k_never && k > out.meet_index)
            out.post_meet_max_gap = std::max(out.post_meet_max_gap, gap);
        if (out.first_floor_pair_index == k_never && rx <= cfg.rho_floor && ry <= cfg.rho_floor)
            out.first_floor_pair_index = k;
        if (out.first_floor_pair_index != k_never && k > out.first_floor_pair_index)
            out.post_floor_max_gap = std::max(out.post_floor_max_gap, gap);
    }
    out.path_x = std::move(bx.p);
    out.path_y = std::move(by.p);
    return out;
}

HittingSample hitting_time_scaling_sample(double delta, double y, std::size_t n,
                                          const SamplerConfig& cfg, int workers) {
    cfg.validate();
    if (!(delta >= 0.0) || delta >= 2.0)
        throw std::domain_error("hitting_time_scaling_sample: needs 0 <= delta < 2");
    if (!(y > 0.0)) throw std::domain_error("hitting_time_scaling_sample: start must be > 0");

    HittingSample hs;
    hs.horizon = 50.0 * y * y;
    const auto steps = static_cast<std::size_t>(std::ceil(hs.horizon / cfg.dt));
    std::vector<double> t0(n);
    parallel_for(n, workers, [&](std::size_t i) {
        Xoshiro256pp rng = make_stream_rng(cfg.seed, cfg.stream_id * 0x10000001ull + i);
        std::normal_distribution<double> gauss(0.0, std::sqrt(cfg.dt));
        double X = y * y;
        double hit = hs.horizon;
        for (std::size_t k = 0; k < steps; ++k) {
            X = std::max(X + 2.0 * std::sqrt(X) * gauss(rng) + delta * cfg.dt, 0.0);
            if (std::sqrt(X) <= cfg.rho_floor) {
                hit = static_cast<double>(k + 1) * cfg.dt;
                break;
            }
        }
        t0[i] = hit;
    });
    for (double t : t0)
        if (t >= hs.horizon) ++hs.censored;
    hs.t0 = std::move(t0);
    return hs;
}

ScalingCheck hitting_time_scaling_check(double delta, double y, std::size_t n,
                                        const SamplerConfig& cfg, int workers) {
    SamplerConfig cfg_y = cfg;
    cfg_y.dt = cfg.dt * y * y;
    cfg_y.rho_floor = cfg.rho_floor * y;
    cfg_y.stream_id = cfg.stream_id + 1;

    ScalingCheck out;
    out.sample_1 = hitting_time_scaling_sample(delta, 1.0, n, cfg, workers);
    out.sample_y = hitting_time_scaling_sample(delta, y, n, cfg_y, workers);
    for (double& t : out.sample_y.t0) t /= y * y;
    out.sample_y.horizon /= y * y;

    const KsResult ks = ks_two_sample(out.sample_y.t0, out.sample_1.t0);
    out.ks_statistic = ks.statistic;
    out.ks_critical_1pct = ks.critical_1pct;
    out.censor_gap = std::abs(static_cast<double>(out.sample_y.censored) -
                              static_cast<double>(out.sample_1.censored)) /
                     static_cast<double>(n);
    return out;
}

void dump_path(const BesselPath& path, double delta, double x, double T, std::ostream& os) {
    char header[32] = {};
    std::memcpy(header, "BPATH01", 8);
    const float f[4] = {static_cast<float>(delta), static_cast<float>(x), static_cast<float>(T),
                        static_cast<float>(path.dt_eff)};
    std::memcpy(header + 8, f, 16);
    const std::uint64_t n = path.db.size();
    std::memcpy(header + 24, &n, 8);
    os.write(header, 32);
    for (std::size_t k = 0; k < path.rho.size(); ++k) {
        const double rec[4] = {path.times[k], path.rho[k], path.eta[k], path.d_vals[k]};
        os.write(reinterpret_cast<const char*>(rec), 32);
    }
}

BesselPath load_path(std::istream& is, double* delta, double* x, double* T) {
    char header[32];
    is.read(header, 32);
    if (!is || std::memcmp(header, "BPATH01", 8) != 0)
        throw std::runtime_error("load_path: bad magic");
    float f[4];
    std::memcpy(f, header + 8, 16);
    std::uint64_t n;
    std::memcpy(&n, header + 24, 8);
    if (delta) *delta = f[0];
    if (x) *x = f[1];
    if (T) *T = f[2];

    BesselPath p;
    p.dt_eff = f[3];
    p.times.resize(n + 1);
    p.rho.resize(n + 1);
    p.eta.resize(n + 1);
    p.d_vals.resize(n + 1);
    for (std::size_t k = 0; k <= n; ++k) {
        double rec[4];
        is.read(reinterpret_cast<char*>(rec), 32);
        if (!is) throw std::runtime_error("load_path: truncated record stream");
        p.times[k] = rec[0];
        p.rho[k] = rec[1];
        p.eta[k] = rec[2];
        p.d_vals[k] = rec[3];
    }
    return p;
}

FloorFunctionals floor_functionals(const std::vector<double>& rho, double dt_eff, double delta,
                                   double floor) {
    if (!(floor > 0.0)) throw std::invalid_argument("floor_functionals: floor must be > 0");
    FloorFunctionals out;
    if (rho.empty() || rho[0] <= floor) return out; // degenerate start, nothing to report

    double a = 0.0; // running trapezoid of 1/rho^2 while alive
    double max_eta = 0.0;
    for (std::size_t k = 0; k + 1 < rho.size(); ++k) {
        const double eta_k = std::exp(0.5 * (1.0 - delta) * a);
        max_eta = std::max(max_eta, eta_k);
        if (rho[k + 1] <= floor) {
            out.t0_index = k + 1;
            out.a_at_hit = a; // sub-interval into the floor dropped
            out.max_eta = max_eta;
            out.d_before_hit = rho[k] * eta_k;
            return out;
        }
        a += 0.5 * dt_eff * (1.0 / (rho[k] * rho[k]) + 1.0 / (rho[k + 1] * rho[k + 1]));
    }
    out.max_eta = std::max(max_eta, std::exp(0.5 * (1.0 - delta) * a));
    return out; // never hit the floor
}

} // namespace bessel
