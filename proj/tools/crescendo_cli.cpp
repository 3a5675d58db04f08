// Command-line front end: offline precompute, online localization, the
// synthetic-data simulator and the evaluation workflows.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "crescendo/errors.hpp"
#include "crescendo/evaluate.hpp"
#include "crescendo/locate.hpp"
#include "crescendo/network.hpp"
#include "crescendo/precompute.hpp"
#include "crescendo/scan.hpp"
#include "crescendo/simulate.hpp"

namespace {

using namespace crescendo;
using nlohmann::json;

int log_level() {
    const char* v = std::getenv("CRESCENDO_LOG");
    if (!v) return 1;
    const std::string s(v);
    if (s == "quiet" || s == "0") return 0;
    if (s == "debug" || s == "2") return 2;
    return 1;
}

void log_info(const std::string& msg) {
    if (log_level() >= 1) std::cerr << msg << '\n';
}

// Every run writes its fully-resolved configuration next to its outputs.
void write_config_echo(const std::string& out_path, const json& cfg) {
    std::ofstream out(out_path + ".config.json");
    out << cfg.dump(2) << '\n';
}

std::vector<double> parse_number_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(std::stod(tok));
    if (out.empty()) throw ValidationError("empty number list");
    return out;
}

GridSpec resolve_grid(const NetworkDB& db, const std::string& bbox, double step) {
    GridSpec spec;
    if (bbox.empty()) {
        db.default_bounding_box(spec.min_x, spec.min_y, spec.max_x, spec.max_y);
    } else {
        auto v = parse_number_list(bbox);
        if (v.size() != 4) throw ValidationError("--bbox wants min_x,min_y,max_x,max_y");
        spec.min_x = v[0];
        spec.min_y = v[1];
        spec.max_x = v[2];
        spec.max_y = v[3];
    }
    spec.step = step;
    spec.validate();
    return spec;
}

json grid_json(const GridSpec& g) {
    return {{"min_x", g.min_x}, {"min_y", g.min_y}, {"max_x", g.max_x},
            {"max_y", g.max_y}, {"step", g.step},   {"nx", g.nx()},
            {"ny", g.ny()}};
}

void write_results_csv(const std::string& path, const std::vector<Scan>& scans,
                       const std::vector<LocationEstimate>& estimates, const NetworkDB& db) {
    std::ofstream out(path);
    if (!out) throw FormatError("cannot open " + path + " for writing");
    out << "scan_id,est_lat,est_lon,max_score,achievable_score,n_max_points,"
           "ambiguity_extent_m,fallback_used,error_m\n";
    out.precision(17);
    for (size_t i = 0; i < scans.size(); ++i) {
        const auto& e = estimates[i];
        out << scans[i].id << ',' << e.geo.lat << ',' << e.geo.lon << ',' << e.max_score << ','
            << e.achievable_score << ',' << e.n_max_points << ',' << e.ambiguity_extent << ','
            << (e.fallback_used ? 1 : 0) << ',';
        if (scans[i].ground_truth) {
            const PlanarPoint truth = project(*scans[i].ground_truth, db.projection_origin());
            out << dist(e.position, truth);
        }
        out << '\n';
    }
}

int cmd_simulate(const std::string& config_path, double density, double area_km2, size_t sites,
                 size_t sectors, size_t cells_per_sector, size_t samples, uint64_t seed,
                 const std::string& mode, const std::string& placement,
                 const std::string& out_dir, bool dump_config) {
    SimConfig cfg;
    if (!config_path.empty()) {
        std::ifstream in(config_path);
        if (!in) throw ParseError("cannot open " + config_path);
        json j;
        in >> j;
        cfg = j.get<SimConfig>();
    }
    if (area_km2 > 0.0) {
        const double side = std::sqrt(area_km2) * 1000.0;
        cfg.min_x = cfg.min_y = 0.0;
        cfg.max_x = cfg.max_y = side;
    }
    if (sectors > 0) cfg.sectors_per_site = sectors;
    if (cells_per_sector > 0) cfg.cells_per_sector = cells_per_sector;
    if (sites > 0) cfg.n_sites = sites;
    size_t target_cells = 0;  // 0 = keep every generated cell
    if (density > 0.0) {
        target_cells = std::max<size_t>(
            1, static_cast<size_t>(std::llround(density * cfg.area_km2())));
        const size_t per_site = cfg.sectors_per_site * cfg.cells_per_sector;
        cfg.n_sites = (target_cells + per_site - 1) / per_site;
    }
    if (seed != 0) cfg.rng_seed = seed;
    if (mode == "ideal")
        cfg.mode = SimMode::Ideal;
    else if (mode == "noisy")
        cfg.mode = SimMode::Noisy;
    else if (!mode.empty())
        throw ValidationError("unknown mode '" + mode + "'");
    if (placement == "hex-lattice")
        cfg.placement = Placement::HexLattice;
    else if (placement == "uniform-random")
        cfg.placement = Placement::UniformRandom;
    else if (!placement.empty())
        throw ValidationError("unknown placement '" + placement + "'");

    if (dump_config) {
        std::cout << json(cfg).dump(2) << '\n';
        return 0;
    }

    NetworkDB db = generate_network(cfg);
    if (target_cells > 0 && target_cells < db.n_cells())
        db = thin_network(db, target_cells, cfg.rng_seed);
    const Dataset ds = generate_dataset(db, cfg, samples);

    std::filesystem::create_directories(out_dir);
    db.save_csv_dir(out_dir + "/network");
    db.save_json(out_dir + "/network.json");
    std::vector<Scan> scans;
    scans.reserve(ds.samples.size());
    for (const auto& s : ds.samples) scans.push_back(s.scan);
    save_scans(out_dir + "/scans.csv", scans);

    json echo;
    echo["config"] = cfg;
    echo["n_sites"] = db.n_sites();
    echo["n_cells"] = db.n_cells();
    echo["cell_density_per_km2"] = static_cast<double>(db.n_cells()) / cfg.area_km2();
    echo["samples_requested"] = samples;
    echo["samples_written"] = ds.samples.size();
    echo["no_coverage"] = ds.no_coverage;
    std::ofstream out(out_dir + "/config.json");
    out << echo.dump(2) << '\n';
    log_info("simulate: " + std::to_string(db.n_cells()) + " cells, " +
             std::to_string(ds.samples.size()) + " samples (" + std::to_string(ds.no_coverage) +
             " no-coverage) -> " + out_dir);
    return 0;
}

int cmd_precompute(const std::string& network, double step, const std::string& bbox,
                   const std::string& out, const std::string& debug_json, int threads) {
    const NetworkDB db = NetworkDB::load(network);
    const GridSpec spec = resolve_grid(db, bbox, step);
    const PrecomputeTable table = PrecomputeTable::build(db, spec, threads);
    table.save(out);
    if (!debug_json.empty()) table.export_json(debug_json, db);
    json echo = {{"network", network}, {"grid", grid_json(spec)},
                 {"fingerprint", db.fingerprint()}, {"threads", threads}};
    write_config_echo(out, echo);
    std::cout << "grid " << spec.nx() << " x " << spec.ny() << " (" << table.n_records()
              << " points), step " << spec.step << " m\n";
    return 0;
}

int cmd_localize(const std::string& table_path, const std::string& network,
                 const std::string& scans_path, const std::string& out) {
    const NetworkDB db = NetworkDB::load(network);
    const PrecomputeTable table = PrecomputeTable::load(table_path);
    table.check_matches(db);
    const std::vector<Scan> scans = load_scans(scans_path);
    std::vector<LocationEstimate> estimates;
    size_t dropped = 0;
    estimates.reserve(scans.size());
    for (const auto& s : scans) {
        estimates.push_back(localize(s, table, db));
        dropped += estimates.back().dropped_entries;
    }
    write_results_csv(out, scans, estimates, db);
    json echo = {{"table", table_path}, {"network", network}, {"scans", scans_path},
                 {"n_scans", scans.size()}, {"dropped_entries", dropped}};
    write_config_echo(out, echo);
    log_info("localize: " + std::to_string(scans.size()) + " scans -> " + out +
             (dropped ? " (" + std::to_string(dropped) + " unresolvable entries dropped)" : ""));
    return 0;
}

int cmd_evaluate(const std::string& table_path, const std::string& network,
                 const std::string& scans_path, const std::string& out, const std::string& format,
                 const std::string& cdf_out) {
    const NetworkDB db = NetworkDB::load(network);
    const PrecomputeTable table = PrecomputeTable::load(table_path);
    const std::vector<Scan> scans = load_scans(scans_path);
    const MethodComparison cmp = evaluate(to_samples(scans, db), table, db);
    json report;
    report["config"] = {{"table", table_path},
                        {"network", network},
                        {"scans", scans_path},
                        {"grid", grid_json(table.spec())},
                        {"error_metric", "euclidean planar meters"},
                        {"exclusions", "scans with no resolvable cell, applied to all methods"}};
    report["comparison"] = cmp;
    if (format == "csv") {
        write_comparison_csv(out, cmp);
        write_config_echo(out, report["config"]);
    } else {
        write_report_json(out, report);
    }
    if (!cdf_out.empty()) write_cdf_dat(cdf_out, cmp.crescendo);
    std::cout << "median error (m): crescendo " << cmp.crescendo.median_m << ", cell_id "
              << cmp.cell_id.median_m << ", centroid " << cmp.centroid.median_m << '\n';
    return 0;
}

int cmd_sweep_grid(const std::string& network, const std::string& scans_path,
                   const std::string& steps_str, const std::string& bbox, const std::string& out,
                   int threads) {
    const NetworkDB db = NetworkDB::load(network);
    const std::vector<Scan> scans = load_scans(scans_path);
    const auto steps = parse_number_list(steps_str);
    const GridSpec box = resolve_grid(db, bbox, steps.front());
    const auto rows = sweep_grid_size(steps, db, box, to_samples(scans, db), threads);
    json report;
    report["config"] = {{"network", network}, {"scans", scans_path}, {"steps", steps},
                        {"grid_box", grid_json(box)}};
    auto jrows = json::array();
    for (const auto& r : rows)
        jrows.push_back({{"step", r.step},
                         {"n_records", r.n_records},
                         {"median_m", r.median_m},
                         {"mean_runtime_us", r.mean_runtime_us},
                         {"table_build_s", r.table_build_s}});
    report["rows"] = std::move(jrows);
    write_report_json(out, report);
    for (const auto& r : rows)
        std::cout << "step " << r.step << ": median " << r.median_m << " m, "
                  << r.mean_runtime_us << " us/estimate\n";
    return 0;
}

int cmd_sweep_density(const std::string& config_path, const std::string& densities_str,
                      size_t samples, double step, const std::string& out, int threads) {
    std::ifstream in(config_path);
    if (!in) throw ParseError("cannot open " + config_path);
    json j;
    in >> j;
    const SimConfig cfg = j.get<SimConfig>();
    const auto densities = parse_number_list(densities_str);
    const auto rows = sweep_density(densities, cfg, samples, step, threads);
    json report;
    report["config"] = {{"sim", cfg}, {"densities", densities}, {"samples", samples},
                        {"grid_step", step}};
    auto jrows = json::array();
    for (const auto& r : rows)
        jrows.push_back({{"target_density", r.target_density},
                         {"actual_density", r.actual_density},
                         {"n_cells", r.n_cells},
                         {"n_sites", r.n_sites},
                         {"no_coverage", r.no_coverage},
                         {"comparison", r.comparison}});
    report["rows"] = std::move(jrows);
    write_report_json(out, report);
    for (const auto& r : rows)
        std::cout << "density " << r.target_density << " (" << r.n_cells << " cells): median "
                  << r.comparison.crescendo.median_m << " m\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Calibration-free cellular localization from relative signal strengths"};
    app.require_subcommand(1);

    // simulate
    std::string sim_config, sim_mode, sim_placement, sim_out = "sim_out";
    double sim_density = 0.0, sim_area = 0.0;
    size_t sim_sites = 0, sim_sectors = 0, sim_cps = 0, sim_samples = 1000;
    uint64_t sim_seed = 0;
    bool sim_dump = false;
    auto* sim = app.add_subcommand("simulate", "Generate a synthetic network and scan dataset");
    sim->add_option("--config", sim_config, "SimConfig JSON file");
    sim->add_option("--density", sim_density, "target cell density, cells/km^2");
    sim->add_option("--area", sim_area, "square area, km^2");
    sim->add_option("--sites", sim_sites, "site count (overridden by --density)");
    sim->add_option("--sectors", sim_sectors, "sectors per site");
    sim->add_option("--cells-per-sector", sim_cps, "cells per sector");
    sim->add_option("--samples", sim_samples, "ground-truth samples to draw");
    sim->add_option("--seed", sim_seed, "RNG seed (nonzero overrides config)");
    sim->add_option("--mode", sim_mode, "ideal|noisy");
    sim->add_option("--placement", sim_placement, "uniform-random|hex-lattice");
    sim->add_option("--out-dir", sim_out, "output directory");
    sim->add_flag("--dump-config", sim_dump, "print the resolved config and exit");

    // precompute
    std::string pre_network, pre_bbox, pre_out = "table.crsc", pre_debug;
    double pre_step = 50.0;
    int pre_threads = 0;
    auto* pre = app.add_subcommand("precompute", "Build the offline grid table");
    pre->add_option("--network", pre_network, "network CSV directory or JSON file")->required();
    pre->add_option("--step", pre_step, "grid step, meters");
    pre->add_option("--bbox", pre_bbox, "min_x,min_y,max_x,max_y (default: sites + margin)");
    pre->add_option("--out", pre_out, "output table file");
    pre->add_option("--debug-json", pre_debug, "also write a JSON debug export");
    pre->add_option("--threads", pre_threads, "worker threads (0 = auto)");

    // localize
    std::string loc_table, loc_network, loc_scans, loc_out = "results.csv";
    auto* loc = app.add_subcommand("localize", "Estimate positions for a scan file");
    loc->add_option("--table", loc_table, "precompute table")->required();
    loc->add_option("--network", loc_network, "network CSV directory or JSON file")->required();
    loc->add_option("--scans", loc_scans, "scan CSV file")->required();
    loc->add_option("--out", loc_out, "results CSV");

    // evaluate
    std::string ev_table, ev_network, ev_scans, ev_out = "report.json", ev_format = "json", ev_cdf;
    auto* ev = app.add_subcommand("evaluate", "Compare against the Cell ID and Centroid baselines");
    ev->add_option("--table", ev_table, "precompute table")->required();
    ev->add_option("--network", ev_network, "network CSV directory or JSON file")->required();
    ev->add_option("--scans", ev_scans, "scan CSV with ground truth")->required();
    ev->add_option("--out", ev_out, "report file");
    ev->add_option("--format", ev_format, "json|csv")->check(CLI::IsMember({"json", "csv"}));
    ev->add_option("--cdf", ev_cdf, "also write a gnuplot-style CDF data file");

    // sweep
    auto* sweep = app.add_subcommand("sweep", "Parameter sweeps");
    sweep->require_subcommand(1);
    std::string sg_network, sg_scans, sg_steps = "25,50,100,200", sg_bbox, sg_out = "sweep_grid.json";
    int sg_threads = 0;
    auto* sg = sweep->add_subcommand("grid", "Grid-step sweep on fixed data");
    sg->add_option("--network", sg_network)->required();
    sg->add_option("--scans", sg_scans)->required();
    sg->add_option("--steps", sg_steps, "comma-separated steps, meters");
    sg->add_option("--bbox", sg_bbox);
    sg->add_option("--out", sg_out);
    sg->add_option("--threads", sg_threads);
    std::string sd_config, sd_densities = "21,50,100,224", sd_out = "sweep_density.json";
    size_t sd_samples = 1000;
    double sd_step = 50.0;
    int sd_threads = 0;
    auto* sd = sweep->add_subcommand("density", "Cell-density sweep with uniform cell dropping");
    sd->add_option("--config", sd_config, "SimConfig JSON (densest network)")->required();
    sd->add_option("--densities", sd_densities, "comma-separated targets, cells/km^2");
    sd->add_option("--samples", sd_samples);
    sd->add_option("--step", sd_step, "grid step, meters");
    sd->add_option("--out", sd_out);
    sd->add_option("--threads", sd_threads);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (sim->parsed())
            return cmd_simulate(sim_config, sim_density, sim_area, sim_sites, sim_sectors, sim_cps,
                                sim_samples, sim_seed, sim_mode, sim_placement, sim_out, sim_dump);
        if (pre->parsed())
            return cmd_precompute(pre_network, pre_step, pre_bbox, pre_out, pre_debug, pre_threads);
        if (loc->parsed()) return cmd_localize(loc_table, loc_network, loc_scans, loc_out);
        if (ev->parsed())
            return cmd_evaluate(ev_table, ev_network, ev_scans, ev_out, ev_format, ev_cdf);
        if (sg->parsed())
            return cmd_sweep_grid(sg_network, sg_scans, sg_steps, sg_bbox, sg_out, sg_threads);
        if (sd->parsed())
            return cmd_sweep_density(sd_config, sd_densities, sd_samples, sd_step, sd_out,
                                     sd_threads);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
