#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "crescendo/network.hpp"
#include "crescendo/precompute.hpp"
#include "crescendo/scan.hpp"

namespace crescendo {

enum class SimMode { Ideal, Noisy };
enum class Placement { UniformRandom, HexLattice };

// Log-distance path loss with optional log-normal shadowing. In ideal mode a
// cell is invisible outside its sector and shadowing is off; in noisy mode
// out-of-sector reception is attenuated by a fixed penalty instead.
struct PropagationParams {
    double tx_power = -20.0;            // dBm at the 1 m reference distance
    double path_loss_exponent = 3.0;
    double shadowing_sigma = 6.0;       // dB
    double out_of_sector_penalty = 20.0;  // dB
    double detection_threshold = -115.0;  // dBm
    size_t max_visible = kMaxVisibleCells;
};

struct SimConfig {
    // Area of interest, meters in the anchor frame.
    double min_x = 0.0, min_y = 0.0, max_x = 700.0, max_y = 700.0;
    size_t n_sites = 13;
    size_t sectors_per_site = 3;
    size_t cells_per_sector = 3;
    Placement placement = Placement::UniformRandom;
    uint64_t rng_seed = 1;
    SimMode mode = SimMode::Noisy;
    PropagationParams propagation;
    // Geographic point the planar area frame is anchored to.
    GeoPoint geo_anchor{30.0, 31.0};

    double area_km2() const { return (max_x - min_x) * (max_y - min_y) / 1e6; }
    double cell_density() const {
        return static_cast<double>(n_sites * sectors_per_site * cells_per_sector) / area_km2();
    }
    // Site count whose total cell count best matches a target density.
    static size_t sites_for_density(double cells_per_km2, double area_km2,
                                    size_t sectors_per_site, size_t cells_per_sector);
};

void to_json(nlohmann::json& j, const PropagationParams& p);
void from_json(const nlohmann::json& j, PropagationParams& p);
void to_json(nlohmann::json& j, const SimConfig& c);
void from_json(const nlohmann::json& j, SimConfig& c);

NetworkDB generate_network(const SimConfig& cfg);

// Maps a point from the config's anchor frame into the network's projection
// frame (both projections are affine, so boxes map to boxes).
PlanarPoint anchor_to_db_frame(const PlanarPoint& p, const SimConfig& cfg, const NetworkDB& db);
GridSpec area_grid(const SimConfig& cfg, const NetworkDB& db, double step);

// Received power of one cell at p, or nullopt when undetectable.
std::optional<double> simulate_rss(const PlanarPoint& p, uint32_t cell, const NetworkDB& db,
                                   const PropagationParams& params, SimMode mode,
                                   std::mt19937_64& rng);

// Full observation at p: every cell simulated, in ideal mode at most one cell
// per site, then the strongest `max_visible` kept. Empty entries mean no
// coverage at p.
Scan simulate_scan(const PlanarPoint& p, const NetworkDB& db, const SimConfig& cfg,
                   std::mt19937_64& rng);

struct GroundTruthSample {
    PlanarPoint true_position;  // network projection frame
    Scan scan;
};

struct Dataset {
    std::vector<GroundTruthSample> samples;
    size_t no_coverage = 0;
};

// n_samples uniform positions over the config area; each sample uses an RNG
// stream derived from (rng_seed, sample index) so the result is independent
// of evaluation order. No-coverage positions are dropped and counted.
Dataset generate_dataset(const NetworkDB& db, const SimConfig& cfg, size_t n_samples);

// RNG stream for one sample index.
std::mt19937_64 sample_rng(uint64_t seed, uint64_t index);

// Keeps `target_cells` cells chosen uniformly at random (seeded); sectors and
// sites left without cells are removed.
NetworkDB thin_network(const NetworkDB& db, size_t target_cells, uint64_t seed);

}  // namespace crescendo
