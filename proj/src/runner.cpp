#include "saltlab/runner.hpp"

#include "saltlab/advection.hpp"
#include "saltlab/initial_conditions.hpp"
#include "saltlab/rng.hpp"
#include "saltlab/salt_euler.hpp"
#include "saltlab/salt_rsw.hpp"
#include "saltlab/snapshot.hpp"
#include "saltlab/stratonovich.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <mutex>
#include <optional>
#include <thread>

namespace saltlab {

namespace fs = std::filesystem;

namespace {

using Metrics = std::map<std::string, double>;

std::string member_dir_name(int m) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "member_%03d", m);
    return buf;
}

std::string snapshot_name(std::size_t step) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "snap_%06zu.sfld", step);
    return buf;
}

bool on_cadence(std::size_t step, std::size_t n_steps, int every) {
    return step == 0 || step == n_steps || step % std::size_t(every) == 0;
}

bool snapshot_due(std::size_t step, std::size_t n_steps, int every) {
    return step == n_steps || (every > 0 && step % std::size_t(every) == 0);
}

double relative_drift(double v0, double v1) { return v0 == 0.0 ? std::abs(v1) : std::abs(v1 - v0) / std::abs(v0); }

/// Where a member writes its artifacts; null dir means "compute only".
struct Sink {
    const fs::path* dir = nullptr;
    std::ostream* log = nullptr;
    std::mutex* log_mu = nullptr;

    void warn(const std::string& msg) const {
        if (!log) return;
        std::lock_guard lock(*log_mu);
        *log << "warning: " << msg << '\n';
    }
};

// Tracks the last completed step so aborts can be reported.
struct Progress {
    std::size_t last_valid_step = 0;
};

EulerState initial_euler_state(const RunConfig& cfg, const Grid2D& g) {
    const auto init = cfg.resolved_init();
    const bool vort = cfg.mode == RunMode::EulerVorticity;
    if (init == "taylor-green")
        return vort ? make_vorticity_state(taylor_green_vorticity(g, cfg.amplitude))
                    : make_velocity_state(taylor_green_velocity(g, cfg.amplitude));
    if (init == "random") {
        RandomTrigField psi(cfg.init_kmax, cfg.init_seed, 2.0);
        psi.normalise_velocity_rms(cfg.amplitude);
        return vort ? make_vorticity_state(psi.laplacian(g)) : make_velocity_state(psi.perp_gradient(g));
    }
    if (init == "zero" || init == "rest") return vort ? make_vorticity_state(ScalarField(g)) : make_velocity_state(VectorField2D(g));
    throw ConfigError("init.kind", "'" + init + "' is not valid for " + to_string(cfg.mode));
}

struct EulerResult {
    EulerState final;
    Metrics metrics;
};

EulerResult simulate_euler(const RunConfig& cfg, const Grid2D& g, const DrivingPath& path, const Sink& sink,
                           Progress& progress) {
    const auto basis = make_noise_basis(cfg, g);
    EulerOptions opts;
    opts.project_noise_channels = cfg.project_noise_channels;
    opts.store_pressure = sink.dir != nullptr;
    opts.corrector_iterations = std::size_t(cfg.corrector_iterations);
    const bool vort = cfg.mode == RunMode::EulerVorticity;
    const std::size_t N = path.grid().n_steps();

    EulerState state = initial_euler_state(cfg, g);
    if (opts.store_pressure) {
        auto p = pressure_components(velocity(state), basis);
        state.p0 = std::move(p.p0);
        state.pk = std::move(p.pk);
    }
    const double courant = advisory_courant(state, basis, path.grid().dt());
    if (courant > 0.5) sink.warn("advisory Courant number " + format_double(courant) + " exceeds 0.5");

    std::ofstream diag_file, chan_file;
    std::optional<CsvWriter> diag, chan;
    if (sink.dir) {
        diag_file.open(*sink.dir / "diagnostics.csv");
        diag.emplace(diag_file, std::vector<std::string>{"energy", "enstrophy", "casimir4", "div_rms", "p0_norm",
                                                         "pk_norm_total"});
        if (!vort) {
            std::vector<std::string> cols;
            for (std::size_t k = 0; k <= basis.size(); ++k) cols.push_back("div_channel_" + std::to_string(k));
            chan_file.open(*sink.dir / "channels.csv");
            chan.emplace(chan_file, cols);
        }
    }
    auto snapshot = [&](const EulerState& s) {
        if (vort)
            write_snapshot(*sink.dir / snapshot_name(s.step), s.time, {&s.omega});
        else
            write_snapshot(*sink.dir / snapshot_name(s.step), s.time, {&s.u.u, &s.u.v});
    };

    const auto first = euler_diagnostics(state);
    if (diag) diag->write(first);
    double max_channel_div = 0.0;
    for (std::size_t n = 0; n < N; ++n) {
        const auto dS = path.increments(n);
        ChannelDivergence cd;
        state = vort ? step_vorticity(state, basis, dS, opts) : step_velocity(state, basis, dS, opts, &cd);
        progress.last_valid_step = n + 1;
        for (double d : cd.rms) max_channel_div = std::max(max_channel_div, d);
        if (sink.dir && on_cadence(n + 1, N, cfg.diagnostics_every)) {
            diag->write(euler_diagnostics(state));
            if (chan) {
                DiagnosticsRecord rec;
                rec.step = state.step;
                rec.time = state.time;
                for (std::size_t k = 0; k < cd.rms.size(); ++k) rec.set("div_channel_" + std::to_string(k), cd.rms[k]);
                chan->write(rec);
            }
        }
        if (sink.dir && snapshot_due(n + 1, N, cfg.snapshot_every)) snapshot(state);
    }
    const auto last = euler_diagnostics(state);
    EulerResult r{std::move(state), {}};
    r.metrics["enstrophy_drift"] = relative_drift(first.get("enstrophy"), last.get("enstrophy"));
    r.metrics["casimir4_drift"] = relative_drift(first.get("casimir4"), last.get("casimir4"));
    r.metrics["energy_drift"] = relative_drift(first.get("energy"), last.get("energy"));
    r.metrics["div_rms"] = last.get("div_rms");
    if (!vort) r.metrics["max_channel_div"] = max_channel_div;
    return r;
}

RswParams rsw_params(const RunConfig& cfg, const Grid2D& g) {
    ScalarField f(g, cfg.coriolis);
    const double A = cfg.topography;
    auto b = ScalarField::from_function(g, [A](double x, double y) { return A * std::cos(x) * std::cos(y); });
    return make_rsw_params(cfg.epsilon, cfg.froude, std::move(f), std::move(b));
}

RswState initial_rsw_state(const RunConfig& cfg, const Grid2D& g, const RswParams& p) {
    const auto init = cfg.resolved_init();
    if (init == "balanced") return balanced_rsw_state(g, p, cfg.depth, cfg.amplitude, cfg.init_kmax, cfg.init_seed);
    if (init == "rest" || init == "zero") {
        RswState s;
        s.u = VectorField2D(g);
        s.eta = ScalarField(g, cfg.depth);
        return s;
    }
    throw ConfigError("init.kind", "'" + init + "' is not valid for rsw");
}

double particle_residual(const ScalarField& q0, const ScalarField& q, const ParticleSet& ps) {
    return ps.size() ? kiw_residual(q0, q, ps) : 0.0;
}

Metrics simulate_rsw(const RunConfig& cfg, const Grid2D& g, const DrivingPath& path, const Sink& sink,
                     Progress& progress) {
    const auto basis = make_noise_basis(cfg, g);
    const auto params = rsw_params(cfg, g);
    const std::size_t N = path.grid().n_steps();
    RswState state = initial_rsw_state(cfg, g, params);
    ParticleSet particles = random_particles(std::size_t(cfg.particles), cfg.init_seed);
    const auto q0 = potential_vorticity(state, params);

    std::ofstream diag_file, pv_file;
    std::optional<CsvWriter> diag, pv;
    if (sink.dir) {
        diag_file.open(*sink.dir / "diagnostics.csv");
        diag.emplace(diag_file, std::vector<std::string>{"mass", "energy", "pv_min", "pv_max", "eta_min"});
        pv_file.open(*sink.dir / "pv_particles.csv");
        pv.emplace(pv_file, std::vector<std::string>{"pv_residual"});
    }
    const auto first = rsw_diagnostics(state, params);
    if (diag) {
        diag->write(first);
        DiagnosticsRecord rec{0, state.time, {{"pv_residual", 0.0}}};
        pv->write(rec);
    }
    double pv_res = 0.0;
    for (std::size_t n = 0; n < N; ++n) {
        const auto dS = path.increments(n);
        RswState next = step_rsw(state, params, basis, dS, std::size_t(cfg.corrector_iterations));
        if (particles.size()) particles = advance_particles_step(particles, state.u, next.u, basis, dS);
        state = std::move(next);
        progress.last_valid_step = n + 1;
        const bool record = sink.dir && on_cadence(n + 1, N, cfg.diagnostics_every);
        if (record || n + 1 == N) pv_res = particle_residual(q0, potential_vorticity(state, params), particles);
        if (record) {
            diag->write(rsw_diagnostics(state, params));
            pv->write(DiagnosticsRecord{state.step, state.time, {{"pv_residual", pv_res}}});
        }
        if (sink.dir && snapshot_due(n + 1, N, cfg.snapshot_every))
            write_snapshot(*sink.dir / snapshot_name(state.step), state.time, {&state.u.u, &state.u.v, &state.eta});
    }
    const auto last = rsw_diagnostics(state, params);
    return {{"mass_drift", relative_drift(first.get("mass"), last.get("mass"))},
            {"pv_residual", pv_res},
            {"energy_drift", relative_drift(first.get("energy"), last.get("energy"))}};
}

Metrics simulate_advection(const RunConfig& cfg, const Grid2D& g, const DrivingPath& path, const Sink& sink,
                           Progress& progress) {
    const auto basis = make_noise_basis(cfg, g);
    const std::size_t N = path.grid().n_steps();
    RandomTrigField psi(cfg.init_kmax, cfg.init_seed, 2.0);
    psi.normalise_velocity_rms(cfg.amplitude);
    const VectorField2D u = psi.perp_gradient(g);
    RandomTrigField scalar(cfg.init_kmax, cfg.init_seed + 1, 1.0);
    scalar.normalise_rms(1.0);
    const ScalarField a0 = scalar.sample(g);
    ScalarField a = a0;
    ParticleSet particles = random_particles(std::size_t(cfg.particles), cfg.init_seed);

    std::ofstream diag_file, part_file;
    std::optional<CsvWriter> diag;
    if (sink.dir) {
        diag_file.open(*sink.dir / "diagnostics.csv");
        diag.emplace(diag_file, std::vector<std::string>{"kiw_residual", "a_min", "a_max", "a_mean"});
        part_file.open(*sink.dir / "particles.csv");
        part_file << "step,time,particle_id,x,y,a_value,residual\n";
    }
    const SpectralInterpolator i0(a0);
    auto record = [&](std::size_t step, double time) {
        const SpectralInterpolator ia(a);
        double r = 0.0;
        for (std::size_t p = 0; p < particles.size(); ++p) {
            const auto& x = particles.positions[p];
            const auto& x0 = particles.initial[p];
            const double av = ia(x[0], x[1]);
            const double res = std::abs(av - i0(x0[0], x0[1]));
            r = std::max(r, res);
            if (sink.dir)
                part_file << step << ',' << format_double(time) << ',' << p << ',' << format_double(x[0]) << ','
                          << format_double(x[1]) << ',' << format_double(av) << ',' << format_double(res) << '\n';
        }
        if (diag)
            diag->write(DiagnosticsRecord{
                step, time, {{"kiw_residual", r}, {"a_min", min_value(a)}, {"a_max", max_value(a)}, {"a_mean", mean(a)}}});
        return r;
    };
    if (sink.dir) record(0, path.grid().t0());
    double residual = 0.0, max_residual = 0.0;
    for (std::size_t n = 0; n < N; ++n) {
        const auto dS = path.increments(n);
        a = advect_scalar_step(a, u, u, basis, dS);
        particles = advance_particles_step(particles, u, u, basis, dS);
        progress.last_valid_step = n + 1;
        if ((sink.dir && on_cadence(n + 1, N, cfg.diagnostics_every)) || n + 1 == N) {
            residual = record(n + 1, path.grid().time(n + 1));
            max_residual = std::max(max_residual, residual);
        }
        if (sink.dir && snapshot_due(n + 1, N, cfg.snapshot_every))
            write_snapshot(*sink.dir / snapshot_name(n + 1), path.grid().time(n + 1), {&a});
    }
    const double excess = std::max(max_value(a) - max_value(a0), min_value(a0) - min_value(a));
    return {{"kiw_residual", residual}, {"kiw_residual_max", max_residual}, {"range_excess", std::max(0.0, excess)}};
}

std::uint64_t sub_seed(std::uint64_t seed, std::uint64_t k) {
    return CounterNormal::mix(seed ^ CounterNormal::mix(k + 0x5a17ull));
}

std::size_t noise_count(const RunConfig& cfg) { return cfg.modes.empty() ? std::size_t(cfg.K) : cfg.modes.size(); }

// Geometric Brownian motion dX = mu X dt + sigma X o dW against its exact
// solution, on successively bridge-refined copies of one coarse path.
struct SdeResult {
    std::vector<double> dt;
    std::vector<double> error;
    double slope = 0.0;
};

SdeResult simulate_sde(const RunConfig& cfg, std::uint64_t seed, int levels) {
    const double mu = cfg.sde_mu, sigma = cfg.sde_sigma, x0 = cfg.sde_x0;
    const VectorMap drift = [mu](const StateVector& x) { return StateVector{mu * x[0]}; };
    const std::vector<VectorMap> diff{[sigma](const StateVector& x) { return StateVector{sigma * x[0]}; }};
    SdeResult r;
    r.error.assign(std::size_t(levels), 0.0);
    for (int l = 0; l < levels; ++l) r.dt.push_back(std::ldexp(cfg.dt, -l));
    for (int p = 0; p < cfg.sde_paths; ++p) {
        DrivingPath path = sample_brownian(TimeGrid(0.0, cfg.T, cfg.n_steps()), 1, sub_seed(seed, std::uint64_t(p)));
        const double exact = x0 * std::exp(mu * cfg.T + sigma * path.value(1, path.grid().n_steps()));
        for (int l = 0; l < levels; ++l) {
            if (l > 0) path = refine(path, 2, sub_seed(path.seed(), std::uint64_t(l)));
            StateVector x{x0};
            for (std::size_t n = 0; n < path.grid().n_steps(); ++n) {
                const auto dS = path.increments(n);
                x = heun_step(x, drift, diff, dS, std::size_t(cfg.corrector_iterations));
            }
            r.error[std::size_t(l)] += std::abs(x[0] - exact) / cfg.sde_paths;
        }
    }
    r.slope = fitted_order(r.dt, r.error);
    return r;
}

Metrics run_sde_member(const RunConfig& cfg, std::uint64_t seed, const Sink& sink) {
    const auto r = simulate_sde(cfg, seed, cfg.sde_levels);
    if (sink.dir) {
        std::ofstream out(*sink.dir / "convergence.csv");
        out << "dt,strong_error\n";
        for (std::size_t l = 0; l < r.dt.size(); ++l)
            out << format_double(r.dt[l]) << ',' << format_double(r.error[l]) << '\n';
        out << "# fitted_slope," << format_double(r.slope) << '\n';
    }
    return {{"fitted_slope", r.slope}, {"finest_error", r.error.back()}};
}

Metrics run_lemma_member(const RunConfig& cfg, std::uint64_t seed, const Sink& sink) {
    std::ofstream out;
    if (sink.dir) {
        out.open(*sink.dir / "lemma.csv");
        out << "seed,m,width,error\n";
    }
    const TimeGrid grid(0.0, cfg.T, cfg.n_steps());
    int passed = 0;
    for (int s = 0; s < cfg.lemma_seeds; ++s) {
        const std::uint64_t ps = seed + std::uint64_t(s);
        const auto path = sample_brownian(grid, 1, ps);
        const auto W = path.component(1);
        const auto res = fundamental_lemma_check(W, path, 1, cfg.lemma_a, cfg.lemma_b, std::size_t(cfg.lemma_smooth));
        passed += res.converged();
        if (sink.dir)
            for (std::size_t m = 0; m < res.errors.size(); ++m)
                out << ps << ',' << m + 1 << ',' << format_double(res.widths[m]) << ','
                    << format_double(res.errors[m]) << '\n';
    }
    return {{"success_fraction", double(passed) / cfg.lemma_seeds}};
}

Metrics simulate_member(const RunConfig& cfg, std::uint64_t seed, const DrivingPath* path, const Sink& sink,
                        Progress& progress) {
    switch (cfg.mode) {
        case RunMode::SdeConvergence:
            return run_sde_member(cfg, seed, sink);
        case RunMode::LemmaCheck:
            return run_lemma_member(cfg, seed, sink);
        default:
            break;
    }
    const Grid2D g(std::size_t(cfg.nx), std::size_t(cfg.ny));
    switch (cfg.mode) {
        case RunMode::EulerVorticity:
        case RunMode::EulerVelocity:
            return simulate_euler(cfg, g, *path, sink, progress).metrics;
        case RunMode::Rsw:
            return simulate_rsw(cfg, g, *path, sink, progress);
        default:
            return simulate_advection(cfg, g, *path, sink, progress);
    }
}

double median(std::vector<double> v) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    const std::size_t h = v.size() / 2;
    return v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

// Runs job(i) for i in [0, n) on up to `workers` threads.
template <class Job>
void parallel_for(int n, int workers, Job&& job) {
    std::atomic<int> next{0};
    auto worker = [&] {
        for (int i = next++; i < n; i = next++) job(i);
    };
    const int t = std::clamp(workers, 1, std::max(n, 1));
    std::vector<std::thread> pool;
    for (int k = 1; k < t; ++k) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

DrivingPath make_driving_path(const RunConfig& cfg, std::size_t K, std::uint64_t seed) {
    const TimeGrid grid(0.0, cfg.T, cfg.n_steps());
    if (cfg.path == "ou") return sample_ou(grid, int(K), cfg.ou_theta, cfg.ou_sigma, seed);
    return sample_brownian(grid, int(K), seed);
}

RunOutcome run(const RunConfig& cfg, std::ostream& log) {
    validate_config(cfg);
    if (is_field_mode(cfg.mode)) {
        // Surface bad init kinds as config errors before any member starts.
        const Grid2D g(8, 8);
        RunConfig probe = cfg;
        probe.nx = probe.ny = 8;
        if (cfg.mode == RunMode::Rsw)
            initial_rsw_state(probe, g, rsw_params(probe, g));
        else if (cfg.mode != RunMode::AdvectionTest)
            initial_euler_state(probe, g);
    }
    RunOutcome outcome;
    outcome.out_dir = cfg.out;
    fs::create_directories(outcome.out_dir);
    outcome.members.resize(std::size_t(cfg.members));
    std::mutex log_mu;
    const auto t_start = std::chrono::steady_clock::now();

    parallel_for(cfg.members, cfg.workers, [&](int m) {
        auto& mo = outcome.members[std::size_t(m)];
        mo.index = m;
        mo.seed = cfg.seed + std::uint64_t(m);
        const fs::path dir = outcome.out_dir / member_dir_name(m);
        fs::create_directories(dir);
        const Sink sink{&dir, &log, &log_mu};
        Progress progress;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            std::optional<DrivingPath> path;
            if (is_field_mode(cfg.mode)) path.emplace(make_driving_path(cfg, noise_count(cfg), mo.seed));
            mo.summary = simulate_member(cfg, mo.seed, path ? &*path : nullptr, sink, progress);
            mo.last_valid_step = progress.last_valid_step;
        } catch (const SolverAbort& e) {
            mo.ok = false;
            mo.last_valid_step = progress.last_valid_step;
            mo.message = e.what();
            std::lock_guard lock(log_mu);
            log << "member " << m << " aborted: " << e.what() << '\n';
        }
        mo.wall_time = seconds_since(t0);
    });

    nlohmann::ordered_json manifest;
    manifest["version"] = SALTLAB_VERSION;
    manifest["mode"] = to_string(cfg.mode);
    manifest["config"] = serialize_config(cfg);
    manifest["wall_time"] = seconds_since(t_start);
    auto& members = manifest["members"] = nlohmann::ordered_json::array();
    for (const auto& mo : outcome.members) {
        nlohmann::ordered_json j;
        j["index"] = mo.index;
        j["seed"] = mo.seed;
        j["dir"] = member_dir_name(mo.index);
        j["status"] = mo.ok ? "ok" : "aborted";
        j["last_valid_step"] = mo.last_valid_step;
        if (!mo.ok) j["message"] = mo.message;
        j["wall_time"] = mo.wall_time;
        j["summary"] = mo.summary;
        members.push_back(std::move(j));
        if (!mo.ok) outcome.exit_code = kExitSolverAbort;
    }
    std::ofstream(outcome.out_dir / "manifest.json") << manifest.dump(2) << '\n';
    return outcome;
}

StudyReport convergence_study(const RunConfig& cfg, int levels, std::ostream& log) {
    validate_config(cfg);
    if (levels < 2) throw ConfigError("levels", "a study needs at least 2 levels");
    if (cfg.mode == RunMode::LemmaCheck) throw ConfigError("mode", "lemma-check has no refinement study");
    fs::create_directories(cfg.out);
    std::mutex log_mu;
    const std::size_t L = std::size_t(levels), M = std::size_t(cfg.members);
    // values[m][l][metric]
    std::vector<std::vector<Metrics>> values(M, std::vector<Metrics>(L));
    std::vector<double> dts(L);
    std::vector<int> nxs(L);
    for (std::size_t l = 0; l < L; ++l) {
        dts[l] = std::ldexp(cfg.dt, -int(l));
        nxs[l] = cfg.refine_space ? cfg.nx << l : cfg.nx;
    }
    std::exception_ptr failure;
    parallel_for(cfg.members, cfg.workers, [&](int m) {
        const std::uint64_t seed = cfg.seed + std::uint64_t(m);
        try {
            if (cfg.mode == RunMode::SdeConvergence) {
                const auto r = simulate_sde(cfg, seed, levels);
                for (std::size_t l = 0; l < L; ++l) values[std::size_t(m)][l]["strong_error"] = r.error[l];
                return;
            }
            DrivingPath path = make_driving_path(cfg, noise_count(cfg), seed);
            for (std::size_t l = 0; l < L; ++l) {
                if (l > 0) path = refine(path, 2, sub_seed(seed, l));
                RunConfig c = cfg;
                c.dt = dts[l];
                c.nx = nxs[l];
                c.ny = cfg.refine_space ? cfg.ny << l : cfg.ny;
                Progress progress;
                values[std::size_t(m)][l] = simulate_member(c, seed, &path, Sink{nullptr, &log, &log_mu}, progress);
                std::lock_guard lock(log_mu);
                log << "member " << m << " level " << l << " done\n";
            }
        } catch (...) {
            std::lock_guard lock(log_mu);
            if (!failure) failure = std::current_exception();
        }
    });
    if (failure) std::rethrow_exception(failure);

    StudyReport report;
    for (const auto& [name, v0] : values[0][0]) {
        (void)v0;
        auto& rows = report.metrics[name];
        std::vector<double> med(L), ratios;
        for (std::size_t l = 0; l < L; ++l) {
            std::vector<double> col;
            for (std::size_t m = 0; m < M; ++m) {
                col.push_back(values[m][l].at(name));
                if (l > 0) ratios.push_back(values[m][l - 1].at(name) / values[m][l].at(name));
            }
            med[l] = median(col);
            rows.push_back({int(l), dts[l], nxs[l], med[l], l ? std::log2(med[l - 1] / med[l]) : 0.0});
        }
        report.median_ratio[name] = median(ratios);
        report.fitted_order[name] = fitted_order(dts, med);
    }

    std::ofstream csv(fs::path(cfg.out) / "study.csv");
    csv << "metric,level,dt,nx,value,log2_ratio\n";
    nlohmann::ordered_json j;
    j["mode"] = to_string(cfg.mode);
    j["config"] = serialize_config(cfg);
    j["levels"] = levels;
    for (const auto& [name, rows] : report.metrics) {
        auto& jm = j["metrics"][name];
        for (const auto& r : rows) {
            csv << name << ',' << r.level << ',' << format_double(r.dt) << ',' << r.nx << ',' << format_double(r.value)
                << ',' << format_double(r.log2_ratio) << '\n';
            jm["values"].push_back(r.value);
            jm["log2_ratio"].push_back(r.log2_ratio);
        }
        jm["fitted_order"] = report.fitted_order[name];
        jm["median_ratio"] = report.median_ratio[name];
    }
    std::ofstream(fs::path(cfg.out) / "study.json") << j.dump(2) << '\n';
    return report;
}

}  // namespace saltlab
