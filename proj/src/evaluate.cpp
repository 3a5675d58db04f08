#include "crescendo/evaluate.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>

#include "crescendo/errors.hpp"

namespace crescendo {

namespace {

using Clock = std::chrono::steady_clock;

double percentile(const std::vector<double>& sorted, double q) {
    const size_t n = sorted.size();
    const size_t idx = std::min(n - 1, static_cast<size_t>(std::ceil(q * n)) - 1);
    return sorted[idx];
}

}  // namespace

ErrorStats make_error_stats(std::vector<double> errors, double mean_runtime_us) {
    if (errors.empty()) throw ValidationError("cannot compute statistics of an empty error list");
    std::sort(errors.begin(), errors.end());
    ErrorStats s;
    s.n = errors.size();
    s.median_m = percentile(errors, 0.5);
    s.p75_m = percentile(errors, 0.75);
    s.p90_m = percentile(errors, 0.9);
    s.max_m = errors.back();
    double sum = 0.0;
    for (double e : errors) sum += e;
    s.mean_m = sum / static_cast<double>(errors.size());
    s.cdf.reserve(errors.size());
    for (size_t i = 0; i < errors.size(); ++i)
        s.cdf.emplace_back(errors[i], static_cast<double>(i + 1) / static_cast<double>(errors.size()));
    s.mean_runtime_us = mean_runtime_us;
    return s;
}

void to_json(nlohmann::json& j, const ErrorStats& s) {
    j = {{"n", s.n},           {"median_m", s.median_m}, {"mean_m", s.mean_m},
         {"p75_m", s.p75_m},   {"p90_m", s.p90_m},       {"max_m", s.max_m},
         {"mean_runtime_us", s.mean_runtime_us}};
    auto cdf = nlohmann::json::array();
    for (const auto& [e, f] : s.cdf) cdf.push_back({e, f});
    j["cdf"] = std::move(cdf);
}

void to_json(nlohmann::json& j, const MethodComparison& c) {
    j = {{"crescendo", c.crescendo},
         {"cell_id", c.cell_id},
         {"centroid", c.centroid},
         {"n_input", c.n_input},
         {"excluded", c.excluded},
         {"table_build_s", c.table_build_s}};
}

MethodComparison evaluate(const std::vector<GroundTruthSample>& samples,
                          const PrecomputeTable& table, const NetworkDB& db) {
    if (samples.empty()) throw ValidationError("empty dataset");
    table.check_matches(db);
    MethodComparison out;
    out.n_input = samples.size();
    std::vector<double> err_cres, err_cellid, err_centroid;
    double cres_ns = 0.0, cellid_ns = 0.0, centroid_ns = 0.0;
    for (const auto& sample : samples) {
        ResolvedScan rs = resolve_scan(sample.scan, db);
        if (rs.entries.empty()) {
            ++out.excluded;  // excluded from every method alike
            continue;
        }
        const auto t0 = Clock::now();
        const LocationEstimate est = localize(rs, table, db);
        const auto t1 = Clock::now();
        const PlanarPoint p_cell = cell_id_baseline(rs, db);
        const auto t2 = Clock::now();
        const PlanarPoint p_cent = centroid_baseline(rs, db);
        const auto t3 = Clock::now();
        err_cres.push_back(dist(est.position, sample.true_position));
        err_cellid.push_back(dist(p_cell, sample.true_position));
        err_centroid.push_back(dist(p_cent, sample.true_position));
        cres_ns += std::chrono::duration<double, std::nano>(t1 - t0).count();
        cellid_ns += std::chrono::duration<double, std::nano>(t2 - t1).count();
        centroid_ns += std::chrono::duration<double, std::nano>(t3 - t2).count();
    }
    if (err_cres.empty()) throw ValidationError("no usable samples in dataset");
    const double n = static_cast<double>(err_cres.size());
    out.crescendo = make_error_stats(std::move(err_cres), cres_ns / n / 1000.0);
    out.cell_id = make_error_stats(std::move(err_cellid), cellid_ns / n / 1000.0);
    out.centroid = make_error_stats(std::move(err_centroid), centroid_ns / n / 1000.0);
    return out;
}

std::vector<GroundTruthSample> to_samples(const std::vector<Scan>& scans, const NetworkDB& db) {
    std::vector<GroundTruthSample> out;
    for (const auto& s : scans) {
        if (!s.ground_truth) throw ValidationError("scan " + s.id + " has no ground truth");
        out.push_back({project(*s.ground_truth, db.projection_origin()), s});
    }
    return out;
}

std::vector<GridSweepRow> sweep_grid_size(const std::vector<double>& steps, const NetworkDB& db,
                                          const GridSpec& box,
                                          const std::vector<GroundTruthSample>& samples,
                                          int threads) {
    std::vector<GridSweepRow> rows;
    for (double step : steps) {
        GridSpec spec = box;
        spec.step = step;
        const auto b0 = Clock::now();
        const PrecomputeTable table = PrecomputeTable::build(db, spec, threads);
        const auto b1 = Clock::now();
        const MethodComparison cmp = evaluate(samples, table, db);
        GridSweepRow row;
        row.step = step;
        row.n_records = table.n_records();
        row.median_m = cmp.crescendo.median_m;
        row.mean_runtime_us = cmp.crescendo.mean_runtime_us;
        row.table_build_s = std::chrono::duration<double>(b1 - b0).count();
        rows.push_back(row);
    }
    return rows;
}

std::vector<DensitySweepRow> sweep_density(const std::vector<double>& densities,
                                           const SimConfig& cfg, size_t n_samples,
                                           double grid_step, int threads) {
    const NetworkDB base = generate_network(cfg);
    std::vector<DensitySweepRow> rows;
    for (double density : densities) {
        const size_t target =
            std::max<size_t>(1, static_cast<size_t>(std::llround(density * cfg.area_km2())));
        const NetworkDB db = thin_network(base, target, cfg.rng_seed);
        const Dataset ds = generate_dataset(db, cfg, n_samples);
        const auto b0 = Clock::now();
        const PrecomputeTable table = PrecomputeTable::build(db, area_grid(cfg, db, grid_step),
                                                             threads);
        const auto b1 = Clock::now();
        DensitySweepRow row;
        row.target_density = density;
        row.n_cells = db.n_cells();
        row.n_sites = db.n_sites();
        row.actual_density = static_cast<double>(db.n_cells()) / cfg.area_km2();
        row.no_coverage = ds.no_coverage;
        row.comparison = evaluate(ds.samples, table, db);
        row.comparison.table_build_s = std::chrono::duration<double>(b1 - b0).count();
        rows.push_back(row);
    }
    return rows;
}

void write_report_json(const std::string& path, const nlohmann::json& report) {
    std::ofstream out(path);
    if (!out) throw FormatError("cannot open " + path + " for writing");
    out << report.dump(2) << '\n';
}

void write_comparison_csv(const std::string& path, const MethodComparison& c) {
    std::ofstream out(path);
    if (!out) throw FormatError("cannot open " + path + " for writing");
    out << "method,n,median_m,mean_m,p75_m,p90_m,max_m,mean_runtime_us\n";
    auto row = [&](const char* name, const ErrorStats& s) {
        out << name << ',' << s.n << ',' << s.median_m << ',' << s.mean_m << ',' << s.p75_m << ','
            << s.p90_m << ',' << s.max_m << ',' << s.mean_runtime_us << '\n';
    };
    row("crescendo", c.crescendo);
    row("cell_id", c.cell_id);
    row("centroid", c.centroid);
}

void write_cdf_dat(const std::string& path, const ErrorStats& s) {
    std::ofstream out(path);
    if (!out) throw FormatError("cannot open " + path + " for writing");
    out << "# error_m cumulative_fraction\n";
    for (const auto& [e, f] : s.cdf) out << e << ' ' << f << '\n';
}

}  // namespace crescendo
