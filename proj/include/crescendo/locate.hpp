#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "crescendo/network.hpp"
#include "crescendo/precompute.hpp"
#include "crescendo/scan.hpp"

namespace crescendo {

// Scan entries resolved to cell indices; entries with unknown cell ids are
// dropped and counted rather than treated as fatal.
struct ResolvedScan {
    std::vector<std::pair<uint32_t, double>> entries;  // (cell index, rss dBm)
    size_t dropped = 0;
};

ResolvedScan resolve_scan(const Scan& scan, const NetworkDB& db);

struct SiteRepresentative {
    uint32_t cell_index = 0;
    double rss = 0.0;
};

// One entry per distinct heard site: its strongest heard cell. Keyed by site
// index (ordered, so iteration follows the site-id tie-break order).
using RepresentativeSiteSet = std::map<uint32_t, SiteRepresentative>;

RepresentativeSiteSet cluster_scan(const ResolvedScan& scan, const NetworkDB& db);
RepresentativeSiteSet cluster_scan(const Scan& scan, const NetworkDB& db);

// Site-level constraints derived from one scan: the strongest site, the RSS
// ordering of every pair of heard sites, and the full visible cell set.
struct OnlineConstraints {
    struct SitePair {
        uint32_t a = 0, b = 0;     // a < b
        bool closer_is_a = false;  // larger representative RSS (tie: smaller id)
    };
    uint32_t strongest_site = 0;
    std::vector<SitePair> pairwise;
    std::vector<uint32_t> visible_cells;

    int achievable_score() const {
        return static_cast<int>(pairwise.size() + visible_cells.size());
    }
};

OnlineConstraints build_constraints(const RepresentativeSiteSet& reps, const ResolvedScan& scan);

// Matching constraints at one grid record: +1 per pairwise agreement, +1 per
// visible cell in the record's containing set.
int score_point(const PrecomputeTable& table, size_t record, const OnlineConstraints& oc);

struct LocationEstimate {
    PlanarPoint position;
    GeoPoint geo;
    int max_score = 0;
    int achievable_score = 0;
    size_t n_max_points = 0;
    double ambiguity_extent = 0.0;  // diagonal of the argmax set's bounding box, meters
    bool fallback_used = false;     // strongest site's Voronoi cell had no grid point
    size_t dropped_entries = 0;
};

LocationEstimate localize(const Scan& scan, const PrecomputeTable& table, const NetworkDB& db);
LocationEstimate localize(const ResolvedScan& scan, const PrecomputeTable& table,
                          const NetworkDB& db);

// Baselines: position of the strongest heard cell's site, and the unweighted
// mean of the distinct heard sites.
PlanarPoint cell_id_baseline(const Scan& scan, const NetworkDB& db);
PlanarPoint cell_id_baseline(const ResolvedScan& scan, const NetworkDB& db);
PlanarPoint centroid_baseline(const Scan& scan, const NetworkDB& db);
PlanarPoint centroid_baseline(const ResolvedScan& scan, const NetworkDB& db);

}  // namespace crescendo
