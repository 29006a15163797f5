// SPDX-License-Identifier: Apache-2.0
// Experiment runner: single runs, sweeps, uncertainty-bound validation,
// beam-gain maps and the assignment oracle.
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mris/expcli.hpp"

namespace fs = std::filesystem;
using namespace mris;

namespace {

struct Common {
    std::string config;
    unsigned long seed = 1;
    std::string out = "out";
    int mc_samples = 1000;
    std::vector<std::string> overrides;
};

void add_common(CLI::App* app, Common& c, bool needs_config) {
    auto* opt = app->add_option("--config", c.config, "INI configuration file");
    if (needs_config) opt->required()->check(CLI::ExistingFile);
    app->add_option("--seed", c.seed, "random seed");
    app->add_option("--out", c.out, "output directory");
    app->add_option("--mc-samples", c.mc_samples, "Monte Carlo samples for the worst-case secrecy")
        ->check(CLI::NonNegativeNumber);
    app->add_option("--override", c.overrides, "section.key=value, repeatable");
}

scenario::SystemConfig load(const Common& c) {
    scenario::SystemConfig cfg = c.config.empty() ? scenario::SystemConfig{} : scenario::load_config(c.config);
    for (const auto& o : c.overrides) scenario::apply_override(cfg, o);
    scenario::validate(cfg);
    return cfg;
}

void write_text(const fs::path& p, const std::string& text) {
    std::ofstream f(p);
    if (!f) throw Error("io", "cannot write " + p.string());
    f << text;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Movable-RIS secure ISAC experiments"};
    app.require_subcommand(1);

    Common run_c;
    auto* run = app.add_subcommand("run", "optimize one (config, seed) and report secrecy");
    add_common(run, run_c, true);

    Common sw_c;
    std::string seeds_text = "1-5", preset;
    std::vector<std::string> grid, cells;
    int jobs = 1;
    auto* sweep = app.add_subcommand("sweep", "grid of overrides x seeds");
    add_common(sweep, sw_c, true);
    sweep->add_option("--seeds", seeds_text, "seed list, e.g. 1-5 or 1,3,7");
    sweep->add_option("--grid", grid, "key=v1,v2,... axis, repeatable (cartesian product)");
    sweep->add_option("--cell", cells, "explicit cell as key=v;key=v, repeatable");
    sweep->add_option("--preset", preset, "case-1-1, case-1-2, case-2-1, case-2-2 or trend-5x5");
    sweep->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);

    Common vb_c;
    expcli::BoundsSpec bs;
    double angle_max_deg = 5;
    auto* vb = app.add_subcommand("validate-bounds", "eta, eps and containment over a (D, angle) grid");
    add_common(vb, vb_c, false);
    vb->add_option("--samples", bs.samples, "samples per spot-checked cell");
    vb->add_option("--n-d", bs.n_D, "grid points along D");
    vb->add_option("--n-angle", bs.n_angle, "grid points along Theta = Psi");
    vb->add_option("--d-max", bs.D_max, "largest distance error (m)");
    vb->add_option("--angle-max", angle_max_deg, "largest angular error (deg)");
    vb->add_option("--spot-cells", bs.spot_cells, "cells checked by sampling");
    vb->add_option("--m-r", bs.M_r, "surface rows");
    vb->add_option("--m-c", bs.M_c, "surface columns");

    Common bp_c;
    expcli::MapSpec ms;
    auto* bp = app.add_subcommand("beampattern", "beam-gain map of an optimized design");
    add_common(bp, bp_c, true);
    bp->add_option("--range", ms.range, "map range (m)");
    bp->add_option("--n-az", ms.n_az, "azimuth grid points");
    bp->add_option("--n-el", ms.n_el, "elevation grid points");

    Common or_c;
    std::string or_seeds = "1-10";
    int warmup = 2;
    auto* orc = app.add_subcommand("oracle", "assignment solver vs exhaustive enumeration");
    add_common(orc, or_c, true);
    orc->add_option("--seeds", or_seeds, "seed list");
    orc->add_option("--warmup", warmup, "AO iterations before the comparison");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) {
            auto cfg = load(run_c);
            fs::create_directories(run_c.out);
            auto hash_cfg = cfg;
            hash_cfg.seed = 0;
            std::ofstream log(fs::path(run_c.out) /
                              ("iterations_" + scenario::config_hash(hash_cfg) + "_" + std::to_string(run_c.seed) +
                               ".jsonl"));
            auto res = expcli::run(cfg, run_c.seed, run_c.mc_samples, &log);
            expcli::persist(res.record, run_c.out);
            std::cout << expcli::record_json(res.record) << '\n';
        } else if (*sweep) {
            auto cfg = load(sw_c);
            std::vector<expcli::SweepCell> all;
            if (!preset.empty()) all = expcli::preset_cells(preset);
            for (const auto& c : cells) {
                expcli::SweepCell sc;
                sc.label = c;
                std::stringstream ss(c);
                for (std::string o; std::getline(ss, o, ';');)
                    if (!o.empty()) sc.overrides.push_back(o);
                all.push_back(sc);
            }
            if (!grid.empty()) {
                auto g = expcli::grid_cells(grid);
                all.insert(all.end(), g.begin(), g.end());
            }
            if (all.empty()) all.push_back(expcli::SweepCell{});
            auto seeds = expcli::parse_seeds(seeds_text);
            auto res = expcli::sweep(cfg, all, seeds, sw_c.mc_samples, jobs);
            fs::create_directories(sw_c.out);
            std::string rows = expcli::csv_header() + "\n";
            for (const auto& r : res.rows) rows += expcli::csv_row(r) + "\n";
            write_text(fs::path(sw_c.out) / "sweep.csv", rows);
            write_text(fs::path(sw_c.out) / "sweep_summary.csv", expcli::summary_csv(res.cells));
            std::cout << expcli::summary_csv(res.cells);
        } else if (*vb) {
            bs.seed = vb_c.seed;
            bs.angle_max = deg2rad(angle_max_deg);
            auto cellsv = expcli::validate_bounds(bs);
            fs::create_directories(vb_c.out);
            fs::path csv = fs::path(vb_c.out) / "bounds.csv";
            write_text(csv, expcli::bounds_csv(cellsv));
            expcli::render_heatmap(csv.string(), "D_m", "Theta_deg", "eta", false,
                                   (fs::path(vb_c.out) / "eta.ppm").string());
            expcli::render_heatmap(csv.string(), "D_m", "Theta_deg", "eps", false,
                                   (fs::path(vb_c.out) / "eps.ppm").string());
            std::cout << expcli::bounds_csv(cellsv);
        } else if (*bp) {
            auto cfg = load(bp_c);
            auto res = expcli::run(cfg, bp_c.seed, bp_c.mc_samples);
            auto pts = expcli::beampattern_map(res.state, res.scenario, ms);
            fs::create_directories(bp_c.out);
            fs::path csv = fs::path(bp_c.out) / "beampattern.csv";
            write_text(csv, expcli::map_csv(pts));
            for (const char* layer : {"comm_W", "an_W", "total_W"})
                expcli::render_heatmap(csv.string(), "az_deg", "el_deg", layer, true,
                                       (fs::path(bp_c.out) / (std::string(layer) + ".ppm")).string());
            expcli::persist(res.record, bp_c.out);
            std::cout << expcli::record_json(res.record) << '\n';
        } else if (*orc) {
            auto cfg = load(or_c);
            fs::create_directories(or_c.out);
            std::ofstream f(fs::path(or_c.out) / "oracle.jsonl");
            int matches = 0, n = 0;
            for (unsigned long s : expcli::parse_seeds(or_seeds)) {
                auto r = expcli::oracle_assignment(cfg, s, warmup);
                f << expcli::oracle_json(r) << '\n';
                std::cout << expcli::oracle_json(r) << '\n';
                matches += r.match;
                ++n;
            }
            std::cout << "matches " << matches << " / " << n << '\n';
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
