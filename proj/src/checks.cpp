#include "saltlab/checks.hpp"

#include "saltlab/advection.hpp"
#include "saltlab/initial_conditions.hpp"
#include "saltlab/paths.hpp"
#include "saltlab/runner.hpp"
#include "saltlab/salt_euler.hpp"
#include "saltlab/salt_rsw.hpp"
#include "saltlab/stratonovich.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <unistd.h>

namespace saltlab {

namespace fs = std::filesystem;

namespace {

constexpr double kPi = std::numbers::pi;

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t h = v.size() / 2;
    return v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

// Scratch directory removed on scope exit.
struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& tag) {
        static int counter = 0;
        path = fs::temp_directory_path() /
               ("saltlab-check-" + tag + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
};

NoiseBasis no_noise(const Grid2D& g) { return NoiseBasis(g, {}); }

// ---- 1 -----------------------------------------------------------------

CheckResult deterministic_reduction() {
    const Grid2D g(64, 64);
    const double dt = 1e-3;
    const auto basis = no_noise(g);
    EulerOptions opts;
    opts.store_pressure = false;
    const std::vector<double> dS{dt};
    EulerState a = make_vorticity_state(taylor_green_vorticity(g));
    EulerState b = a;
    bool identical = true;
    for (int n = 0; n < 1000; ++n) {
        a = step_vorticity(a, basis, dS, opts);
        b = step_deterministic(b, dt, opts);
        identical = identical && a.omega == b.omega && a.mean_flow == b.mean_flow;
    }
    const double err = max_abs(a.omega - taylor_green_vorticity(g));
    return {1, "", err < 1e-6 && identical,
            "max|w(T)-w(0)| = " + fmt(err) + " (< 1e-06), stochastic==deterministic bitwise: " +
                (identical ? "yes" : "no")};
}

// ---- 2 -----------------------------------------------------------------

CheckResult stratonovich_identities() {
    double worst_strat = 0.0, worst_bridge = 0.0;
    const int levels = 7;  // dt = 2^-6 .. 2^-12
    const double mu = 0.5, sigma = 1.0;
    const VectorMap drift = [mu](const StateVector& x) { return StateVector{mu * x[0]}; };
    const std::vector<VectorMap> diff{[sigma](const StateVector& x) { return StateVector{sigma * x[0]}; }};
    std::vector<double> dts, errs(levels, 0.0);
    for (int l = 0; l < levels; ++l) dts.push_back(std::ldexp(1.0, -6 - l));
    const int paths = 200;
    for (int p = 0; p < paths; ++p) {
        DrivingPath path = sample_brownian(TimeGrid(0.0, 1.0, 64), 1, 1000 + std::uint64_t(p));
        const std::size_t N0 = path.grid().n_steps();
        const double WT = path.value(1, N0);
        const double exact = std::exp(mu + sigma * WT);
        for (int l = 0; l < levels; ++l) {
            if (l > 0) path = refine(path, 2, 7919 * std::uint64_t(p) + std::uint64_t(l));
            const auto W = path.component(1);
            const std::size_t N = path.grid().n_steps();
            const double s = strat_integral(W, path, 1, 0.0, 1.0);
            const double scale = 1.0 + WT * WT;
            worst_strat = std::max(worst_strat, std::abs(s - 0.5 * WT * WT) / scale);
            const double ito = ito_sum(W, path, 1, 0.0, 1.0);
            const double qv = covariation(W, W, path.grid(), 0.0, 1.0);
            worst_bridge = std::max(worst_bridge, std::abs(ito + 0.5 * qv - s) / scale);
            StateVector x{1.0};
            for (std::size_t n = 0; n < N; ++n) x = heun_step(x, drift, diff, path.increments(n));
            errs[std::size_t(l)] += std::abs(x[0] - exact) / paths;
        }
    }
    const double slope = fitted_order(dts, errs);
    const bool ok = worst_strat < 1e-12 && worst_bridge < 1e-12 && slope >= 0.9;
    return {2, "", ok,
            "|int W o dW - W^2/2| = " + fmt(worst_strat) + " (< 1e-12), |Ito + qv/2 - Strat| = " +
                fmt(worst_bridge) + " (< 1e-12), GBM strong slope = " + fmt(slope) + " (>= 0.9)"};
}

// ---- 3 -----------------------------------------------------------------

CheckResult fundamental_lemma() {
    const TimeGrid grid(0.0, 1.0, 10000);
    int passed = 0;
    std::vector<double> ratios;
    for (int s = 0; s < 100; ++s) {
        const auto path = sample_brownian(grid, 1, 5000 + std::uint64_t(s));
        const auto res = fundamental_lemma_check(path.component(1), path, 1, 0.25, 0.75, 8);
        passed += res.converged();
        ratios.push_back(res.errors.back() / res.errors.front());
    }
    return {3, "", passed >= 95,
            "seeds with e8 < e1/10: " + std::to_string(passed) + "/100 (>= 95), median e8/e1 = " +
                fmt(median(ratios))};
}

// ---- 4 -----------------------------------------------------------------

CheckResult channel_separation() {
    const Grid2D g(64, 64);
    const double dt = 1e-3, T = 0.25;
    const auto basis = make_fourier_basis(g, 4, 2.0, 0.1, 4);
    RandomTrigField psi(4, 11, 2.0);
    psi.normalise_velocity_rms(1.0);
    const auto path = sample_brownian(TimeGrid(0.0, T, std::size_t(std::lround(T / dt))), 4, 21);

    auto run = [&](bool project, std::size_t steps) {
        EulerOptions opts;
        opts.store_pressure = false;
        opts.project_noise_channels = project;
        EulerState s = make_velocity_state(psi.perp_gradient(g));
        double worst = 0.0, least_noise = INFINITY;
        for (std::size_t n = 0; n < steps; ++n) {
            ChannelDivergence cd;
            s = step_velocity(s, basis, path.increments(n), opts, &cd);
            for (std::size_t k = 0; k < cd.rms.size(); ++k) {
                worst = std::max(worst, cd.rms[k]);
                if (k > 0) least_noise = std::min(least_noise, cd.rms[k]);
            }
        }
        return std::pair{worst, least_noise};
    };
    const double projected = run(true, path.grid().n_steps()).first;
    const double suppressed = run(false, 10).second;
    return {4, "", projected < 1e-10 && suppressed > 1e-3,
            "max channel div (projected) = " + fmt(projected) + " (< 1e-10), min noise-channel div without Pk = " +
                fmt(suppressed) + " (> 1e-3)"};
}

// ---- 5 -----------------------------------------------------------------

// Central differences of order 2 * kHalfWidth on a periodic grid, with the
// closed-form weights a_s = 2 (-1)^(s+1) (p!)^2 / ((p-s)! (p+s)!).
constexpr int kHalfWidth = 6;

double central_weight(int s) {
    double w = 2.0 * (s % 2 ? 1.0 : -1.0);
    for (int q = 1; q <= kHalfWidth; ++q) w *= q;
    for (int q = 1; q <= kHalfWidth; ++q) w *= q;
    for (int q = 1; q <= kHalfWidth - s; ++q) w /= q;
    for (int q = 1; q <= kHalfWidth + s; ++q) w /= q;
    return w;
}

std::size_t wrap_index(long i, std::size_t n) { return std::size_t(((i % long(n)) + long(n)) % long(n)); }

double shifted_value(const ScalarField& f, std::size_t i, std::size_t j, Axis axis, long s) {
    const Grid2D& g = f.grid();
    return axis == Axis::X ? f(wrap_index(long(i) + s, g.nx()), j) : f(i, wrap_index(long(j) + s, g.ny()));
}

ScalarField fd_derivative(const ScalarField& f, Axis axis) {
    const Grid2D& g = f.grid();
    const double h = axis == Axis::X ? g.hx() : g.hy();
    ScalarField out(g);
    for (std::size_t i = 0; i < g.nx(); ++i)
        for (std::size_t j = 0; j < g.ny(); ++j) {
            double acc = 0.0;
            for (int s = 1; s <= kHalfWidth; ++s)
                acc += central_weight(s) / s * (shifted_value(f, i, j, axis, s) - shifted_value(f, i, j, axis, -s));
            out(i, j) = acc / (2.0 * h);
        }
    return out;
}

ScalarField fd_laplacian(const ScalarField& f) {
    const Grid2D& g = f.grid();
    ScalarField out(g);
    for (std::size_t i = 0; i < g.nx(); ++i)
        for (std::size_t j = 0; j < g.ny(); ++j) {
            double total = 0.0;
            for (Axis axis : {Axis::X, Axis::Y}) {
                const double h = axis == Axis::X ? g.hx() : g.hy();
                double acc = 0.0;
                for (int s = 1; s <= kHalfWidth; ++s)
                    acc += central_weight(s) / (double(s) * s) *
                           (shifted_value(f, i, j, axis, s) - 2.0 * f(i, j) + shifted_value(f, i, j, axis, -s));
                total += acc / (h * h);
            }
            out(i, j) = total;
        }
    return out;
}

double dot(const ScalarField& a, const ScalarField& b) {
    double s = 0.0;
    for (std::size_t n = 0; n < a.size(); ++n) s += a[n] * b[n];
    return s;
}

// Conjugate gradients on -lap p = -rhs in the zero-mean subspace.
ScalarField fd_poisson(ScalarField rhs) {
    const double m = mean(rhs);
    for (auto& v : rhs.values()) v = -(v - m);
    ScalarField p(rhs.grid()), r = rhs, d = r;
    double rr = dot(r, r);
    const double stop = 1e-30 * std::max(rr, 1e-300);
    for (int it = 0; it < 5000 && rr > stop; ++it) {
        const ScalarField Ad = -1.0 * fd_laplacian(d);
        const double alpha = rr / dot(d, Ad);
        p.axpy(alpha, d);
        r.axpy(-alpha, Ad);
        const double rr_new = dot(r, r);
        d = r + (rr_new / rr) * d;
        rr = rr_new;
    }
    const double pm = mean(p);
    for (auto& v : p.values()) v -= pm;
    return p;
}

CheckResult pressure_consistency() {
    const Grid2D g(64, 64);
    const auto u = taylor_green_velocity(g);
    const auto pc = pressure_components(u, no_noise(g));
    const ScalarField ux = fd_derivative(u.u, Axis::X), uy = fd_derivative(u.u, Axis::Y);
    const ScalarField vx = fd_derivative(u.v, Axis::X), vy = fd_derivative(u.v, Axis::Y);
    // lap P0 = -sum_ij d_j u_i d_i u_j
    ScalarField rhs = multiply(ux, ux) + 2.0 * multiply(uy, vx) + multiply(vy, vy);
    rhs *= -1.0;
    const ScalarField oracle = fd_poisson(rhs);
    const double rel = l2_norm(pc.p0 - oracle) / l2_norm(oracle);

    NoiseMode uniform;
    uniform.phase = NoisePhase::Uniform;
    uniform.ux = 0.3;
    uniform.uy = -0.2;
    const auto pk = pressure_components(u, NoiseBasis(g, {uniform})).pk.at(0);
    const double pk_max = max_abs(pk);
    return {5, "", rel < 1e-6 && pk_max < 1e-12,
            "rel L2(P0 - FD oracle) = " + fmt(rel) + " (< 1e-06), max|Pk| for constant xi = " + fmt(pk_max) +
                " (< 1e-12)"};
}

// ---- 6 -----------------------------------------------------------------

ScalarField shifted(const ScalarField& f, double X, double Y) {
    Spectrum s = forward(f);
    const Grid2D& g = f.grid();
    for (std::size_t i = 0; i < g.nx(); ++i)
        for (std::size_t j = 0; j < g.nky(); ++j)
            s(i, j) *= std::polar(1.0, -(g.kx(i) * X + g.ky(j) * Y));
    return inverse(s);
}

CheckResult translation_equivariance() {
    const Grid2D g(64, 64);
    const double dt = 1e-3, T = 0.5;
    const std::size_t N = std::size_t(std::lround(T / dt));
    NoiseMode m;
    m.phase = NoisePhase::Uniform;
    m.ux = 0.3;
    m.uy = 0.2;
    const NoiseBasis basis(g, {m});
    RandomTrigField psi(2, 31, 2.0);
    psi.normalise_velocity_rms(0.25);  // max |w| about 1
    EulerOptions opts;
    opts.store_pressure = false;

    EulerState det = make_vorticity_state(psi.laplacian(g));
    for (std::size_t n = 0; n < N; ++n) det = step_deterministic(det, dt, opts);

    std::vector<double> errs;
    for (int s = 0; s < 10; ++s) {
        const auto path = sample_brownian(TimeGrid(0.0, T, N), 1, 300 + std::uint64_t(s));
        EulerState st = make_vorticity_state(psi.laplacian(g));
        for (std::size_t n = 0; n < N; ++n) st = step_vorticity(st, basis, path.increments(n), opts);
        const double W = path.value(1, N);
        errs.push_back(max_abs(st.omega - shifted(det.omega, m.ux * W, m.uy * W)));
    }
    const double med = median(errs);
    return {6, "", med < 1e-4, "median max|w - shifted deterministic w| = " + fmt(med) + " (< 1e-04)"};
}

// ---- 7, 9, 10: refinement studies through the runner --------------------

RunConfig field_config(RunMode mode, double dt, double T) {
    RunConfig c;
    c.mode = mode;
    c.nx = c.ny = 64;
    c.dt = dt;
    c.T = T;
    c.K = 4;
    c.init = "default";
    c.seed = 100;
    c.members = 10;
    c.refine_space = false;
    return c;
}

StudyReport quiet_study(RunConfig c, const std::string& tag) {
    TempDir dir(tag);
    c.out = dir.path.string();
    validate_config(c);
    std::ostringstream log;
    return convergence_study(c, 2, log);
}

CheckResult casimir_conservation() {
    const auto rep = quiet_study(field_config(RunMode::EulerVorticity, 5e-4, 0.5), "casimir");
    const double drift = rep.metrics.at("enstrophy_drift").front().value;
    const double ratio = rep.median_ratio.at("enstrophy_drift");
    return {7, "", drift < 1e-3 && ratio >= 1.8,
            "median relative enstrophy drift = " + fmt(drift) + " (< 1e-03), median refinement ratio = " +
                fmt(ratio) + " (>= 1.8)"};
}

// ---- 8 -----------------------------------------------------------------

CheckResult dual_formulation() {
    const Grid2D g(64, 64);
    const double dt = 5e-4, T = 0.25;
    const std::size_t N = std::size_t(std::lround(T / dt));
    const auto basis = make_fourier_basis(g, 4, 2.0, 0.1, 4);
    EulerOptions opts;
    opts.store_pressure = false;
    double worst = 0.0;
    for (int s = 0; s < 3; ++s) {
        RandomTrigField psi(4, 40 + std::uint64_t(s), 2.0);
        psi.normalise_velocity_rms(1.0);
        const auto path = sample_brownian(TimeGrid(0.0, T, N), 4, 400 + std::uint64_t(s));
        EulerState w = make_vorticity_state(psi.laplacian(g));
        EulerState v = make_velocity_state(psi.perp_gradient(g));
        for (std::size_t n = 0; n < N; ++n) {
            const auto dS = path.increments(n);
            w = step_vorticity(w, basis, dS, opts);
            v = step_velocity(v, basis, dS, opts);
        }
        worst = std::max(worst, l2_norm(vorticity(v) - w.omega) / l2_norm(w.omega));
    }
    return {8, "", worst < 1e-3, "max relative L2 vorticity discrepancy = " + fmt(worst) + " (< 1e-03)"};
}

CheckResult kiw_invariance() {
    auto c = field_config(RunMode::AdvectionTest, 1e-3, 0.5);
    c.particles = 100;
    c.refine_space = true;  // residual is limited by the grid as much as by dt
    const auto rep = quiet_study(c, "kiw");
    const double r = rep.metrics.at("kiw_residual").front().value;
    const double ratio = rep.median_ratio.at("kiw_residual");
    return {9, "", r < 1e-3 && ratio >= 1.8,
            "median r(T) = " + fmt(r) + " (< 1e-03), median refinement ratio = " + fmt(ratio) + " (>= 1.8)"};
}

CheckResult rsw_conservation() {
    auto c = field_config(RunMode::Rsw, 5e-4, 0.5);  // 1000 steps
    c.members = 3;
    c.particles = 100;
    c.amplitude = 0.05;
    const auto rep = quiet_study(c, "rsw");
    double mass = 0.0;
    for (const auto& lvl : rep.metrics.at("mass_drift")) mass = std::max(mass, lvl.value);
    const double ratio = rep.median_ratio.at("pv_residual");

    const Grid2D g(64, 64);
    auto params = make_rsw_params(0.1, 1.0, ScalarField(g, 1.0), ScalarField(g));
    RswState a = balanced_rsw_state(g, params, 1.0, 0.05, 4, 1);
    RswState b = a;
    const auto basis = no_noise(g);
    const std::vector<double> dS{5e-4};
    bool identical = true;
    for (int n = 0; n < 200; ++n) {
        a = step_rsw(a, params, basis, dS);
        b = step_rsw_deterministic(b, params, 5e-4);
        identical = identical && a.u == b.u && a.eta == b.eta;
    }
    return {10, "", mass < 1e-10 && ratio >= 1.5 && identical,
            "relative mass drift = " + fmt(mass) + " (< 1e-10), PV residual refinement ratio = " + fmt(ratio) +
                " (>= 1.5), K=0 bitwise match: " + (identical ? "yes" : "no")};
}

// ---- 11 ----------------------------------------------------------------

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

CheckResult reproducibility() {
    std::vector<RunConfig> configs;
    {
        auto c = field_config(RunMode::EulerVelocity, 1e-3, 0.05);
        c.members = 2;
        c.workers = 2;
        c.nx = c.ny = 32;
        c.init = "random";
        configs.push_back(c);
        c.mode = RunMode::Rsw;
        c.init = "balanced";
        c.amplitude = 0.05;
        c.dt = 5e-4;
        c.path = "ou";
        configs.push_back(c);
        c.mode = RunMode::AdvectionTest;
        c.init = "default";
        c.particles = 20;
        configs.push_back(c);
    }
    bool same = true;
    std::size_t files = 0;
    for (auto c : configs) {
        TempDir a("repro-a"), b("repro-b");
        std::ostringstream log;
        c.out = a.path.string();
        run(c, log);
        // second pass serial: output must not depend on scheduling
        c.out = b.path.string();
        c.workers = 1;
        run(c, log);
        for (int m = 0; m < c.members; ++m) {
            char name[32];
            std::snprintf(name, sizeof name, "member_%03d", m);
            for (const auto& entry : fs::directory_iterator(a.path / name)) {
                const auto rel = entry.path().filename();
                if (rel.extension() != ".csv") continue;
                const auto x = slurp(entry.path()), y = slurp(b.path / name / rel);
                same = same && !x.empty() && x == y;
                ++files;
            }
        }
    }
    return {11, "", same && files > 0,
            std::to_string(files) + " diagnostics CSV files compared across reruns (2 workers vs 1), bit-identical: " +
                (same ? "yes" : "no")};
}

struct Entry {
    const char* name;
    CheckResult (*fn)();
};

constexpr std::array<Entry, 11> kChecks{{
    {"deterministic-reduction", deterministic_reduction},
    {"stratonovich-identities", stratonovich_identities},
    {"fundamental-lemma", fundamental_lemma},
    {"channel-separation", channel_separation},
    {"pressure-consistency", pressure_consistency},
    {"translation-equivariance", translation_equivariance},
    {"casimir-conservation", casimir_conservation},
    {"dual-formulation", dual_formulation},
    {"kiw-invariance", kiw_invariance},
    {"rsw-conservation", rsw_conservation},
    {"reproducibility", reproducibility},
}};

}  // namespace

int check_count() { return int(kChecks.size()); }

std::string check_name(int id) { return kChecks.at(std::size_t(id - 1)).name; }

CheckResult run_check(int id) {
    const auto& e = kChecks.at(std::size_t(id - 1));
    const auto t0 = std::chrono::steady_clock::now();
    CheckResult r;
    try {
        r = e.fn();
    } catch (const std::exception& ex) {
        r = {id, "", false, std::string("error: ") + ex.what()};
    }
    r.id = id;
    r.name = e.name;
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

std::string format_check_line(const CheckResult& r) {
    char head[96];
    std::snprintf(head, sizeof head, "%s %2d %-26s", r.passed ? "PASS" : "FAIL", r.id, r.name.c_str());
    return std::string(head) + r.detail + " [" + fmt(r.seconds) + " s]";
}

std::vector<CheckResult> run_checks(std::ostream& out, const std::vector<int>& ids) {
    std::vector<int> todo = ids;
    if (todo.empty())
        for (int i = 1; i <= check_count(); ++i) todo.push_back(i);
    std::vector<CheckResult> results;
    for (int id : todo) {
        results.push_back(run_check(id));
        out << format_check_line(results.back()) << std::endl;
    }
    return results;
}

}  // namespace saltlab
