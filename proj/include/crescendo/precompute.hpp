#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "crescendo/network.hpp"

namespace crescendo {

// Axis-aligned grid: points at (min_x + i*step, min_y + j*step), row-major
// with x varying fastest.
struct GridSpec {
    double min_x = 0.0, min_y = 0.0, max_x = 0.0, max_y = 0.0;
    double step = 50.0;

    size_t nx() const { return static_cast<size_t>((max_x - min_x) / step + 1e-9) + 1; }
    size_t ny() const { return static_cast<size_t>((max_y - min_y) / step + 1e-9) + 1; }
    size_t n_points() const { return nx() * ny(); }
    PlanarPoint point(size_t r) const {
        const size_t w = nx();
        return {min_x + static_cast<double>(r % w) * step,
                min_y + static_cast<double>(r / w) * step};
    }
    void validate() const;
};

std::vector<PlanarPoint> build_grid(const GridSpec& spec);

// Per-grid-point precomputed geometry: discrete Voronoi label, one bit per
// unordered site pair (set = closer to the smaller-index site), and a bitset
// of containing cells. Stored as flat arrays, one word stride per record.
class PrecomputeTable {
public:
    static PrecomputeTable build(const NetworkDB& db, const GridSpec& spec, int threads = 0);

    const GridSpec& spec() const { return spec_; }
    uint64_t network_fingerprint() const { return fingerprint_; }
    uint32_t n_sites() const { return n_sites_; }
    uint32_t n_cells() const { return n_cells_; }
    size_t n_records() const { return voronoi_.size(); }
    size_t n_pairs() const { return static_cast<size_t>(n_sites_) * (n_sites_ - 1) / 2; }

    uint32_t voronoi_site(size_t r) const { return voronoi_[r]; }

    // Flat index of the unordered pair (i, j), i < j, over n sites.
    static size_t pair_index(uint32_t i, uint32_t j, uint32_t n) {
        return static_cast<size_t>(i) * (2 * n - i - 1) / 2 + (j - i - 1);
    }

    // True iff the grid point is closer to the smaller-index site of pair k.
    bool pair_bit(size_t r, size_t k) const {
        const size_t bit = r * pair_stride_bits_ + k;
        return (pair_bits_[bit >> 6] >> (bit & 63)) & 1u;
    }

    bool cell_contained(size_t r, uint32_t cell) const {
        const size_t bit = r * cell_stride_bits_ + cell;
        return (cell_bits_[bit >> 6] >> (bit & 63)) & 1u;
    }

    void save(const std::string& path) const;
    static PrecomputeTable load(const std::string& path);

    // Raises StaleTableError unless the table was built from `db`.
    void check_matches(const NetworkDB& db) const;

    void export_json(const std::string& path, const NetworkDB& db) const;

    bool operator==(const PrecomputeTable& other) const;

private:
    GridSpec spec_;
    uint64_t fingerprint_ = 0;
    uint32_t n_sites_ = 0;
    uint32_t n_cells_ = 0;
    size_t pair_stride_bits_ = 0;
    size_t cell_stride_bits_ = 0;
    std::vector<uint32_t> voronoi_;
    std::vector<uint64_t> pair_bits_;
    std::vector<uint64_t> cell_bits_;
};

}  // namespace crescendo
