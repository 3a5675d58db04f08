#include "crescendo/precompute.hpp"

#include <cstring>
#include <fstream>

#include <json.hpp>

#include "crescendo/errors.hpp"
#include "crescendo/parallel.hpp"

namespace crescendo {

namespace {

constexpr char kMagic[4] = {'C', 'R', 'S', 'C'};
constexpr uint32_t kFormatVersion = 1;

template <typename T>
void write_pod(std::ofstream& out, const T& v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(v));
}

template <typename T>
void read_pod(std::ifstream& in, T& v) {
    in.read(reinterpret_cast<char*>(&v), sizeof(v));
    if (!in) throw FormatError("truncated table file");
}

template <typename T>
void write_vec(std::ofstream& out, const std::vector<T>& v) {
    out.write(reinterpret_cast<const char*>(v.data()),
              static_cast<std::streamsize>(v.size() * sizeof(T)));
}

template <typename T>
void read_vec(std::ifstream& in, std::vector<T>& v, size_t n) {
    v.resize(n);
    in.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(n * sizeof(T)));
    if (!in) throw FormatError("truncated table file");
}

// Records own whole words so parallel builders never share a word.
size_t word_aligned_bits(size_t bits) { return (bits + 63) & ~size_t{63}; }

}  // namespace

void GridSpec::validate() const {
    if (!(step > 0.0)) throw ValidationError("grid step must be positive");
    if (!(max_x >= min_x) || !(max_y >= min_y))
        throw ValidationError("grid bounding box is inverted");
}

std::vector<PlanarPoint> build_grid(const GridSpec& spec) {
    spec.validate();
    std::vector<PlanarPoint> pts;
    pts.reserve(spec.n_points());
    for (size_t r = 0; r < spec.n_points(); ++r) pts.push_back(spec.point(r));
    return pts;
}

PrecomputeTable PrecomputeTable::build(const NetworkDB& db, const GridSpec& spec, int threads) {
    spec.validate();
    PrecomputeTable t;
    t.spec_ = spec;
    t.fingerprint_ = db.fingerprint();
    t.n_sites_ = db.n_sites();
    t.n_cells_ = db.n_cells();
    const size_t n_records = spec.n_points();
    t.pair_stride_bits_ = word_aligned_bits(t.n_pairs());
    t.cell_stride_bits_ = word_aligned_bits(t.n_cells_);
    t.voronoi_.assign(n_records, 0);
    t.pair_bits_.assign(n_records * t.pair_stride_bits_ / 64, 0);
    t.cell_bits_.assign(n_records * t.cell_stride_bits_ / 64, 0);

    const uint32_t n = t.n_sites_;
    parallel_for(n_records, threads, [&](size_t r) {
        const PlanarPoint p = spec.point(r);
        t.voronoi_[r] = db.nearest_site(p);
        for (uint32_t i = 0; i < n; ++i)
            for (uint32_t j = i + 1; j < n; ++j)
                if (db.closer_site(p, i, j) == i) {
                    const size_t bit = r * t.pair_stride_bits_ + pair_index(i, j, n);
                    t.pair_bits_[bit >> 6] |= uint64_t{1} << (bit & 63);
                }
        // containment is decided per sector; all of a sector's cells share it
        for (uint32_t s = 0; s < db.sectors().size(); ++s) {
            if (!db.sector_contains(s, p)) continue;
            for (uint32_t c : db.cells_of_sector()[s]) {
                const size_t bit = r * t.cell_stride_bits_ + c;
                t.cell_bits_[bit >> 6] |= uint64_t{1} << (bit & 63);
            }
        }
    });
    return t;
}

void PrecomputeTable::save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FormatError("cannot open " + path + " for writing");
    out.write(kMagic, 4);
    write_pod(out, kFormatVersion);
    write_pod(out, spec_.min_x);
    write_pod(out, spec_.min_y);
    write_pod(out, spec_.max_x);
    write_pod(out, spec_.max_y);
    write_pod(out, spec_.step);
    write_pod(out, n_sites_);
    write_pod(out, n_cells_);
    write_pod(out, fingerprint_);
    write_pod(out, static_cast<uint64_t>(voronoi_.size()));
    write_vec(out, voronoi_);
    write_vec(out, pair_bits_);
    write_vec(out, cell_bits_);
    if (!out) throw FormatError("write failed for " + path);
}

PrecomputeTable PrecomputeTable::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open " + path);
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kMagic, 4) != 0)
        throw FormatError(path + " is not a table file");
    uint32_t version;
    read_pod(in, version);
    if (version != kFormatVersion)
        throw FormatError("unsupported table version " + std::to_string(version));
    PrecomputeTable t;
    read_pod(in, t.spec_.min_x);
    read_pod(in, t.spec_.min_y);
    read_pod(in, t.spec_.max_x);
    read_pod(in, t.spec_.max_y);
    read_pod(in, t.spec_.step);
    read_pod(in, t.n_sites_);
    read_pod(in, t.n_cells_);
    read_pod(in, t.fingerprint_);
    uint64_t n_records;
    read_pod(in, n_records);
    t.spec_.validate();
    if (n_records != t.spec_.n_points()) throw FormatError("record count mismatch");
    t.pair_stride_bits_ = word_aligned_bits(t.n_pairs());
    t.cell_stride_bits_ = word_aligned_bits(t.n_cells_);
    read_vec(in, t.voronoi_, n_records);
    read_vec(in, t.pair_bits_, n_records * t.pair_stride_bits_ / 64);
    read_vec(in, t.cell_bits_, n_records * t.cell_stride_bits_ / 64);
    return t;
}

void PrecomputeTable::check_matches(const NetworkDB& db) const {
    if (db.fingerprint() != fingerprint_)
        throw StaleTableError("table was built from a different network (fingerprint mismatch)");
}

void PrecomputeTable::export_json(const std::string& path, const NetworkDB& db) const {
    check_matches(db);
    nlohmann::json j;
    j["grid"] = {{"min_x", spec_.min_x}, {"min_y", spec_.min_y}, {"max_x", spec_.max_x},
                 {"max_y", spec_.max_y}, {"step", spec_.step},   {"nx", spec_.nx()},
                 {"ny", spec_.ny()}};
    j["network_fingerprint"] = fingerprint_;
    auto records = nlohmann::json::array();
    const uint32_t n = n_sites_;
    for (size_t r = 0; r < n_records(); ++r) {
        const PlanarPoint p = spec_.point(r);
        nlohmann::json rec;
        rec["x"] = p.x;
        rec["y"] = p.y;
        rec["voronoi_site"] = db.sites()[voronoi_[r]].id;
        auto pairs = nlohmann::json::array();
        for (uint32_t i = 0; i < n; ++i)
            for (uint32_t j = i + 1; j < n; ++j)
                pairs.push_back({{"a", db.sites()[i].id},
                                 {"b", db.sites()[j].id},
                                 {"closer", pair_bit(r, pair_index(i, j, n)) ? db.sites()[i].id
                                                                             : db.sites()[j].id}});
        rec["pairwise"] = std::move(pairs);
        auto contained = nlohmann::json::array();
        for (uint32_t c = 0; c < n_cells_; ++c)
            if (cell_contained(r, c)) contained.push_back(db.cells()[c].id);
        rec["containing_cells"] = std::move(contained);
        records.push_back(std::move(rec));
    }
    j["records"] = std::move(records);
    std::ofstream out(path);
    out << j.dump(2) << '\n';
}

bool PrecomputeTable::operator==(const PrecomputeTable& other) const {
    return spec_.min_x == other.spec_.min_x && spec_.min_y == other.spec_.min_y &&
           spec_.max_x == other.spec_.max_x && spec_.max_y == other.spec_.max_y &&
           spec_.step == other.spec_.step && fingerprint_ == other.fingerprint_ &&
           n_sites_ == other.n_sites_ && n_cells_ == other.n_cells_ &&
           voronoi_ == other.voronoi_ && pair_bits_ == other.pair_bits_ &&
           cell_bits_ == other.cell_bits_;
}

}  // namespace crescendo
