// saltlab command-line driver: run, study, check, plot.
#include "saltlab/checks.hpp"
#include "saltlab/config.hpp"
#include "saltlab/diagnostics.hpp"
#include "saltlab/runner.hpp"
#include "saltlab/snapshot.hpp"
#include "saltlab/stratonovich.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace saltlab;

namespace {

std::vector<std::string> csv_header(const fs::path& file) {
    std::ifstream in(file);
    std::string line, cell;
    std::getline(in, line);
    std::vector<std::string> cols;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ',')) cols.push_back(cell);
    return cols;
}

// One gnuplot script per CSV (columns against time) and a whitespace matrix
// per snapshot field, usable with `plot 'f.dat' matrix with image`.
int export_gnuplot(const fs::path& root) {
    int written = 0;
    for (const auto& entry : fs::recursive_directory_iterator(root)) {
        const auto& p = entry.path();
        if (p.extension() == ".csv" && p.filename() != "particles.csv") {
            const auto cols = csv_header(p);
            if (cols.size() < 3 || cols[1] != "time") continue;
            fs::path gp = p;
            gp.replace_extension(".gp");
            std::ofstream out(gp);
            out << "set datafile separator ','\nset key autotitle columnhead\nset xlabel 'time'\n";
            out << "set terminal pngcairo size 900,600\n";
            for (std::size_t c = 2; c < cols.size(); ++c) {
                out << "set output '" << p.stem().string() << "_" << cols[c] << ".png'\n";
                out << "plot '" << p.filename().string() << "' using 2:" << c + 1 << " with lines\n";
            }
            ++written;
        } else if (p.extension() == ".sfld") {
            const auto snap = read_snapshot(p);
            for (std::size_t f = 0; f < snap.fields.size(); ++f) {
                fs::path dat = p;
                dat.replace_extension("." + std::to_string(f) + ".dat");
                std::ofstream out(dat);
                out << "# time " << format_double(snap.time) << "\n";
                const auto& field = snap.fields[f];
                for (std::size_t j = 0; j < field.grid().ny(); ++j) {
                    for (std::size_t i = 0; i < field.grid().nx(); ++i)
                        out << (i ? " " : "") << format_double(field(i, j));
                    out << '\n';
                }
                ++written;
            }
        }
    }
    std::cout << "wrote " << written << " gnuplot files under " << root << '\n';
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"saltlab: stochastic advection by Lie transport solvers"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(SALTLAB_VERSION));

    std::string config_file, out_dir;
    std::uint64_t seed = 0;
    int members = 0, workers = 0, levels = 3;

    auto* run_cmd = app.add_subcommand("run", "run a configuration (single run or ensemble)");
    run_cmd->add_option("config", config_file, "configuration file")->required()->check(CLI::ExistingFile);
    auto* seed_opt = run_cmd->add_option("--seed", seed, "base seed (member m uses seed + m)");
    run_cmd->add_option("--members", members, "ensemble size");
    run_cmd->add_option("--workers", workers, "concurrent members");
    run_cmd->add_option("--out", out_dir, "output directory");

    auto* study_cmd = app.add_subcommand("study", "nested-dt refinement study");
    study_cmd->add_option("config", config_file, "configuration file")->required()->check(CLI::ExistingFile);
    study_cmd->add_option("--levels", levels, "refinement levels (>= 2)")->required();
    auto* study_seed = study_cmd->add_option("--seed", seed, "base seed");
    study_cmd->add_option("--members", members, "members per level");
    study_cmd->add_option("--workers", workers, "concurrent members");
    study_cmd->add_option("--out", out_dir, "output directory");

    std::vector<int> only;
    auto* check_cmd = app.add_subcommand("check", "run the built-in acceptance checks");
    check_cmd->add_option("--only", only, "check ids to run (default: all)");
    bool list = false;
    check_cmd->add_flag("--list", list, "list checks and exit");

    std::string plot_dir;
    auto* plot_cmd = app.add_subcommand("plot", "emit gnuplot scripts and matrices for a run directory");
    plot_cmd->add_option("dir", plot_dir, "run output directory")->required()->check(CLI::ExistingDirectory);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfigError;
    }

    auto load = [&](CLI::Option* seed_option) {
        RunConfig cfg = load_config(config_file);
        if (*seed_option) cfg.seed = seed;
        if (members > 0) cfg.members = members;
        if (workers > 0) cfg.workers = workers;
        if (!out_dir.empty()) cfg.out = out_dir;
        validate_config(cfg);
        return cfg;
    };

    try {
        if (*run_cmd) {
            const auto outcome = run(load(seed_opt), std::cerr);
            for (const auto& m : outcome.members) {
                std::cout << "member " << m.index << " seed " << m.seed << ": " << (m.ok ? "ok" : "aborted");
                for (const auto& [k, v] : m.summary) std::cout << ' ' << k << '=' << format_double(v);
                std::cout << '\n';
            }
            std::cout << "manifest: " << (outcome.out_dir / "manifest.json").string() << '\n';
            return outcome.exit_code;
        }
        if (*study_cmd) {
            const auto report = convergence_study(load(study_seed), levels, std::cerr);
            for (const auto& [name, rows] : report.metrics) {
                std::cout << name << ":";
                for (const auto& r : rows) std::cout << ' ' << format_double(r.value);
                std::cout << "  fitted_order=" << format_double(report.fitted_order.at(name))
                          << " median_ratio=" << format_double(report.median_ratio.at(name)) << '\n';
            }
            return kExitOk;
        }
        if (*check_cmd) {
            if (list) {
                for (int i = 1; i <= check_count(); ++i) std::cout << i << ' ' << check_name(i) << '\n';
                return kExitOk;
            }
            const auto results = run_checks(std::cout, only);
            for (const auto& r : results)
                if (!r.passed) return kExitCheckFailed;
            return kExitOk;
        }
        if (*plot_cmd) return export_gnuplot(plot_dir);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfigError;
    } catch (const SolverAbort& e) {
        std::cerr << "solver abort: " << e.what() << '\n';
        return kExitSolverAbort;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfigError;
    }
    return kExitOk;
}
