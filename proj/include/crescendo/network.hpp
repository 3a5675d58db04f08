#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "crescendo/geometry.hpp"

namespace crescendo {

struct Site {
    std::string id;
    GeoPoint geo;
    PlanarPoint pos;
};

struct Sector {
    std::string id;
    uint32_t site_index = 0;
    double azimuth_start = 0.0;  // degrees clockwise from north, [0, 360)
    double azimuth_span = 360.0; // degrees, (0, 360]
};

struct Cell {
    std::string id;
    uint32_t sector_index = 0;
    std::string frequency_tag;
};

// Raw rows as they appear in the input files, before reference resolution.
struct SiteRecord { std::string id; double lat, lon; };
struct SectorRecord { std::string id, site_id; double azimuth_start, azimuth_span; };
struct CellRecord { std::string id, sector_id, frequency_tag; };

// Immutable network database. Sites, sectors and cells are stored sorted by
// id, so index order coincides with the lexicographic tie-break order used
// throughout.
class NetworkDB {
public:
    static NetworkDB build(std::vector<SiteRecord> sites, std::vector<SectorRecord> sectors,
                           std::vector<CellRecord> cells);

    // `path` is either a directory holding sites.csv/sectors.csv/cells.csv or
    // a single .json document with the same three arrays.
    static NetworkDB load(const std::string& path);
    static NetworkDB load_csv_dir(const std::string& dir);
    static NetworkDB load_json(const std::string& path);

    void save_csv_dir(const std::string& dir) const;
    void save_json(const std::string& path) const;

    const std::vector<Site>& sites() const { return sites_; }
    const std::vector<Sector>& sectors() const { return sectors_; }
    const std::vector<Cell>& cells() const { return cells_; }
    const GeoPoint& projection_origin() const { return origin_; }

    uint32_t n_sites() const { return static_cast<uint32_t>(sites_.size()); }
    uint32_t n_cells() const { return static_cast<uint32_t>(cells_.size()); }

    std::optional<uint32_t> find_cell(const std::string& cell_id) const;
    std::optional<uint32_t> find_site(const std::string& site_id) const;

    uint32_t site_of_cell(uint32_t cell_index) const {
        return sectors_[cells_[cell_index].sector_index].site_index;
    }

    // Index of the closest site; ties within the bisector tolerance resolve
    // to the smallest site id (= smallest index).
    uint32_t nearest_site(const PlanarPoint& p) const;

    // Half-open azimuth containment with the site-coincident point contained
    // by convention.
    bool sector_contains(uint32_t sector_index, const PlanarPoint& p) const;
    bool cell_contains(uint32_t cell_index, const PlanarPoint& p) const {
        return sector_contains(cells_[cell_index].sector_index, p);
    }

    BisectorSide bisector_side_sites(const PlanarPoint& p, uint32_t a, uint32_t b) const;

    // Winner of the pairwise comparison: closer site, bisector ties to the
    // smaller index.
    uint32_t closer_site(const PlanarPoint& p, uint32_t a, uint32_t b) const;

    // Cells grouped by sector and by site, index-sorted.
    const std::vector<std::vector<uint32_t>>& cells_of_sector() const { return cells_of_sector_; }
    const std::vector<std::vector<uint32_t>>& cells_of_site() const { return cells_of_site_; }

    // FNV-1a hash over the canonical content; used to pair precompute tables
    // with the network they were built from.
    uint64_t fingerprint() const { return fingerprint_; }

    // Smallest axis-aligned box containing the sites, inflated by the median
    // inter-site nearest-neighbour distance (fallback 500 m for one site).
    void default_bounding_box(double& min_x, double& min_y, double& max_x, double& max_y) const;

private:
    std::vector<Site> sites_;
    std::vector<Sector> sectors_;
    std::vector<Cell> cells_;
    std::vector<std::vector<uint32_t>> cells_of_sector_;
    std::vector<std::vector<uint32_t>> cells_of_site_;
    std::unordered_map<std::string, uint32_t> site_index_;
    std::unordered_map<std::string, uint32_t> cell_index_;
    GeoPoint origin_;
    uint64_t fingerprint_ = 0;
};

}  // namespace crescendo
