#include "saltlab/runner.hpp"

#include <doctest.h>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace saltlab;
namespace fs = std::filesystem;

namespace {

struct Scratch {
    fs::path dir;
    explicit Scratch(const std::string& name) : dir(fs::temp_directory_path() / ("saltlab-unit-" + name)) {
        fs::remove_all(dir);
    }
    ~Scratch() { fs::remove_all(dir); }
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

RunConfig small(RunMode mode, const fs::path& out) {
    RunConfig c;
    c.mode = mode;
    c.nx = c.ny = 16;
    c.dt = 1e-3;
    c.T = 0.01;
    c.K = 2;
    c.out = out.string();
    return c;
}

}  // namespace

TEST_CASE("ensemble writes one directory per member and reruns bit-identically") {
    Scratch a("ens-a"), b("ens-b");
    auto c = small(RunMode::EulerVelocity, a.dir);
    c.members = 8;
    c.workers = 3;
    c.snapshot_every = 5;
    std::ostringstream log;
    const auto out = run(c, log);
    CHECK(out.exit_code == kExitOk);
    for (int m = 0; m < 8; ++m) {
        char name[32];
        std::snprintf(name, sizeof name, "member_%03d", m);
        CHECK(fs::exists(a.dir / name / "diagnostics.csv"));
        CHECK(fs::exists(a.dir / name / "channels.csv"));
        CHECK(fs::exists(a.dir / name / "snap_000010.sfld"));
    }
    const auto manifest = nlohmann::json::parse(slurp(a.dir / "manifest.json"));
    CHECK(manifest["members"].size() == 8);
    CHECK(manifest["members"][3]["seed"] == 4);
    CHECK(manifest.contains("version"));
    CHECK(manifest.contains("wall_time"));
    // the manifest alone reproduces the run
    auto again = parse_config(manifest["config"].get<std::string>());
    again.out = b.dir.string();
    CHECK(again.members == 8);
    run(again, log);
    for (int m : {0, 7}) {
        char name[32];
        std::snprintf(name, sizeof name, "member_%03d", m);
        CHECK(slurp(a.dir / name / "diagnostics.csv") == slurp(b.dir / name / "diagnostics.csv"));
    }
}

TEST_CASE("diagnostics header per mode") {
    Scratch s("headers");
    std::ostringstream log;
    auto c = small(RunMode::EulerVorticity, s.dir);
    run(c, log);
    CHECK(slurp(s.dir / "member_000" / "diagnostics.csv").rfind("step,time,energy,enstrophy,casimir4,div_rms,p0_norm,pk_norm_total\n", 0) == 0);
    c.mode = RunMode::Rsw;
    c.amplitude = 0.05;
    c.dt = 5e-4;
    run(c, log);
    CHECK(slurp(s.dir / "member_000" / "diagnostics.csv").rfind("step,time,mass,energy,pv_min,pv_max,eta_min\n", 0) == 0);
    c.mode = RunMode::AdvectionTest;
    c.particles = 4;
    run(c, log);
    CHECK(slurp(s.dir / "member_000" / "particles.csv").rfind("step,time,particle_id,x,y,a_value,residual\n", 0) == 0);
}

TEST_CASE("sde-convergence writes (dt, strong error) pairs and a slope") {
    Scratch s("sde");
    RunConfig c;
    c.mode = RunMode::SdeConvergence;
    c.dt = 1.0 / 64;
    c.T = 1.0;
    c.sde_paths = 100;
    c.sde_levels = 5;
    c.out = s.dir.string();
    std::ostringstream log;
    const auto out = run(c, log);
    const auto csv = slurp(s.dir / "member_000" / "convergence.csv");
    CHECK(csv.rfind("dt,strong_error\n", 0) == 0);
    CHECK(out.members[0].summary.at("fitted_slope") >= 0.9);
}

TEST_CASE("lemma-check reports a success fraction") {
    Scratch s("lemma");
    RunConfig c;
    c.mode = RunMode::LemmaCheck;
    c.dt = 1e-3;
    c.T = 1.0;
    c.lemma_seeds = 10;
    c.lemma_smooth = 4;
    c.out = s.dir.string();
    std::ostringstream log;
    const auto out = run(c, log);
    const double f = out.members[0].summary.at("success_fraction");
    CHECK(f >= 0.0);
    CHECK(f <= 1.0);
    CHECK(fs::exists(s.dir / "member_000" / "lemma.csv"));
}

TEST_CASE("solver abort is recorded with the last valid step") {
    Scratch s("abort");
    auto c = small(RunMode::EulerVorticity, s.dir);
    c.init = "random";
    c.amplitude = 1e4;
    c.dt = 0.05;
    c.T = 5.0;
    std::ostringstream log;
    const auto out = run(c, log);
    CHECK(out.exit_code == kExitSolverAbort);
    CHECK(!out.members[0].ok);
    const auto manifest = nlohmann::json::parse(slurp(s.dir / "manifest.json"));
    CHECK(manifest["members"][0]["status"] == "aborted");
    CHECK(manifest["members"][0]["last_valid_step"].get<std::size_t>() < 100);
    CHECK(log.str().find("aborted") != std::string::npos);
}

TEST_CASE("convergence study reports ratios between levels") {
    Scratch s("study");
    auto c = small(RunMode::EulerVorticity, s.dir);
    c.init = "random";
    c.c = 0.5;
    c.T = 0.05;
    c.members = 2;
    c.refine_space = false;
    std::ostringstream log;
    const auto rep = convergence_study(c, 3, log);
    REQUIRE(rep.metrics.count("enstrophy_drift"));
    CHECK(rep.metrics.at("enstrophy_drift").size() == 3);
    CHECK(rep.median_ratio.at("enstrophy_drift") > 1.5);
    CHECK(fs::exists(s.dir / "study.csv"));
    CHECK(fs::exists(s.dir / "study.json"));
    CHECK_THROWS_AS(convergence_study(c, 1, log), ConfigError);
}
