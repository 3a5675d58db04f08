#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "crescendo/locate.hpp"
#include "crescendo/simulate.hpp"

namespace crescendo {

struct ErrorStats {
    size_t n = 0;
    double median_m = 0.0, mean_m = 0.0, p75_m = 0.0, p90_m = 0.0, max_m = 0.0;
    std::vector<std::pair<double, double>> cdf;  // (error_m, cumulative fraction)
    double mean_runtime_us = 0.0;
};

ErrorStats make_error_stats(std::vector<double> errors, double mean_runtime_us);

void to_json(nlohmann::json& j, const ErrorStats& s);

// All three methods evaluated on the identical sample list; samples unusable
// for one method are excluded from all.
struct MethodComparison {
    ErrorStats crescendo, cell_id, centroid;
    size_t n_input = 0;
    size_t excluded = 0;
    double table_build_s = 0.0;
};

void to_json(nlohmann::json& j, const MethodComparison& c);

MethodComparison evaluate(const std::vector<GroundTruthSample>& samples,
                          const PrecomputeTable& table, const NetworkDB& db);

// Scans must carry ground truth; positions are projected into the network frame.
std::vector<GroundTruthSample> to_samples(const std::vector<Scan>& scans, const NetworkDB& db);

struct GridSweepRow {
    double step = 0.0;
    size_t n_records = 0;
    double median_m = 0.0;
    double mean_runtime_us = 0.0;
    double table_build_s = 0.0;
};

// Rebuilds the table per step over a fixed box and dataset.
std::vector<GridSweepRow> sweep_grid_size(const std::vector<double>& steps, const NetworkDB& db,
                                          const GridSpec& box,
                                          const std::vector<GroundTruthSample>& samples,
                                          int threads = 0);

struct DensitySweepRow {
    double target_density = 0.0;
    double actual_density = 0.0;
    size_t n_cells = 0;
    size_t n_sites = 0;
    size_t no_coverage = 0;
    MethodComparison comparison;
};

// Thins the config's network to each target density (cells removed uniformly
// at random, seeded), regenerates scans at the same truth positions, rebuilds
// the table, and evaluates. Densities in cells/km^2.
std::vector<DensitySweepRow> sweep_density(const std::vector<double>& densities,
                                           const SimConfig& cfg, size_t n_samples,
                                           double grid_step, int threads = 0);

void write_report_json(const std::string& path, const nlohmann::json& report);
void write_comparison_csv(const std::string& path, const MethodComparison& c);
void write_cdf_dat(const std::string& path, const ErrorStats& s);

}  // namespace crescendo
