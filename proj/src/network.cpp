#include "crescendo/network.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "crescendo/errors.hpp"

namespace crescendo {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) out.push_back(field);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

double parse_double(const std::string& s, const std::string& file, size_t lineno) {
    try {
        size_t pos = 0;
        double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ParseError(file + ":" + std::to_string(lineno) + ": bad number '" + s + "'");
    }
}

// Reads a CSV file with a header row; calls `row` per data line.
template <typename Fn>
void read_csv(const std::string& path, size_t min_fields, Fn&& row) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    std::string line;
    size_t lineno = 0;
    bool header = true;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (header) { header = false; continue; }
        auto fields = split_csv_line(line);
        if (fields.size() < min_fields)
            throw ParseError(path + ":" + std::to_string(lineno) + ": expected at least " +
                             std::to_string(min_fields) + " fields");
        row(fields, lineno);
    }
}

uint64_t fnv1a(uint64_t h, const void* data, size_t n) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (size_t i = 0; i < n; ++i) {
        h ^= p[i];
        h *= 1099511628211ull;
    }
    return h;
}

uint64_t fnv1a_str(uint64_t h, const std::string& s) { return fnv1a(h, s.data(), s.size()); }
uint64_t fnv1a_f64(uint64_t h, double v) { return fnv1a(h, &v, sizeof(v)); }

}  // namespace

NetworkDB NetworkDB::build(std::vector<SiteRecord> site_rows, std::vector<SectorRecord> sector_rows,
                           std::vector<CellRecord> cell_rows) {
    NetworkDB db;
    if (site_rows.empty()) throw ValidationError("network has no sites");

    auto by_id = [](const auto& a, const auto& b) { return a.id < b.id; };
    std::sort(site_rows.begin(), site_rows.end(), by_id);
    std::sort(sector_rows.begin(), sector_rows.end(), by_id);
    std::sort(cell_rows.begin(), cell_rows.end(), by_id);

    double lat_sum = 0.0, lon_sum = 0.0;
    for (const auto& s : site_rows) {
        if (s.lat < -90.0 || s.lat > 90.0 || s.lon < -180.0 || s.lon > 180.0)
            throw ValidationError("site " + s.id + " has out-of-range coordinates");
        lat_sum += s.lat;
        lon_sum += s.lon;
    }
    db.origin_ = {lat_sum / site_rows.size(), lon_sum / site_rows.size()};

    for (const auto& s : site_rows) {
        if (db.site_index_.count(s.id)) throw ValidationError("duplicate site id " + s.id);
        db.site_index_[s.id] = static_cast<uint32_t>(db.sites_.size());
        GeoPoint geo{s.lat, s.lon};
        db.sites_.push_back({s.id, geo, project(geo, db.origin_)});
    }
    for (size_t i = 0; i < db.sites_.size(); ++i)
        for (size_t j = i + 1; j < db.sites_.size(); ++j)
            if (db.sites_[i].pos.x == db.sites_[j].pos.x && db.sites_[i].pos.y == db.sites_[j].pos.y)
                throw ValidationError("sites " + db.sites_[i].id + " and " + db.sites_[j].id +
                                      " share a position");

    std::unordered_map<std::string, uint32_t> sector_index;
    for (const auto& s : sector_rows) {
        if (sector_index.count(s.id)) throw ValidationError("duplicate sector id " + s.id);
        auto it = db.site_index_.find(s.site_id);
        if (it == db.site_index_.end())
            throw ValidationError("sector " + s.id + " references unknown site " + s.site_id);
        if (!(s.azimuth_span > 0.0) || s.azimuth_span > 360.0)
            throw ValidationError("sector " + s.id + " has invalid span");
        if (s.azimuth_start < 0.0 || s.azimuth_start >= 360.0)
            throw ValidationError("sector " + s.id + " has invalid start azimuth");
        sector_index[s.id] = static_cast<uint32_t>(db.sectors_.size());
        db.sectors_.push_back({s.id, it->second, s.azimuth_start, s.azimuth_span});
    }

    for (const auto& c : cell_rows) {
        if (db.cell_index_.count(c.id)) throw ValidationError("duplicate cell id " + c.id);
        auto it = sector_index.find(c.sector_id);
        if (it == sector_index.end())
            throw ValidationError("cell " + c.id + " references unknown sector " + c.sector_id);
        db.cell_index_[c.id] = static_cast<uint32_t>(db.cells_.size());
        db.cells_.push_back({c.id, it->second, c.frequency_tag});
    }

    db.cells_of_sector_.resize(db.sectors_.size());
    db.cells_of_site_.resize(db.sites_.size());
    for (uint32_t c = 0; c < db.cells_.size(); ++c) {
        db.cells_of_sector_[db.cells_[c].sector_index].push_back(c);
        db.cells_of_site_[db.site_of_cell(c)].push_back(c);
    }

    std::vector<bool> site_has_sector(db.sites_.size(), false);
    for (const auto& s : db.sectors_) site_has_sector[s.site_index] = true;
    for (size_t i = 0; i < db.sites_.size(); ++i)
        if (!site_has_sector[i]) throw ValidationError("site " + db.sites_[i].id + " has no sector");
    for (size_t i = 0; i < db.sectors_.size(); ++i)
        if (db.cells_of_sector_[i].empty())
            throw ValidationError("sector " + db.sectors_[i].id + " has no cell");

    uint64_t h = 1469598103934665603ull;
    for (const auto& s : db.sites_) {
        h = fnv1a_str(h, s.id);
        h = fnv1a_f64(h, s.geo.lat);
        h = fnv1a_f64(h, s.geo.lon);
    }
    for (const auto& s : db.sectors_) {
        h = fnv1a_str(h, s.id);
        h = fnv1a_str(h, db.sites_[s.site_index].id);
        h = fnv1a_f64(h, s.azimuth_start);
        h = fnv1a_f64(h, s.azimuth_span);
    }
    for (const auto& c : db.cells_) {
        h = fnv1a_str(h, c.id);
        h = fnv1a_str(h, db.sectors_[c.sector_index].id);
        h = fnv1a_str(h, c.frequency_tag);
    }
    db.fingerprint_ = h;
    return db;
}

NetworkDB NetworkDB::load(const std::string& path) {
    if (std::filesystem::is_directory(path)) return load_csv_dir(path);
    return load_json(path);
}

NetworkDB NetworkDB::load_csv_dir(const std::string& dir) {
    std::vector<SiteRecord> sites;
    std::vector<SectorRecord> sectors;
    std::vector<CellRecord> cells;
    const std::string sites_path = dir + "/sites.csv";
    const std::string sectors_path = dir + "/sectors.csv";
    const std::string cells_path = dir + "/cells.csv";
    read_csv(sites_path, 3, [&](const std::vector<std::string>& f, size_t ln) {
        sites.push_back({f[0], parse_double(f[1], sites_path, ln), parse_double(f[2], sites_path, ln)});
    });
    read_csv(sectors_path, 4, [&](const std::vector<std::string>& f, size_t ln) {
        sectors.push_back({f[0], f[1], parse_double(f[2], sectors_path, ln),
                           parse_double(f[3], sectors_path, ln)});
    });
    read_csv(cells_path, 2, [&](const std::vector<std::string>& f, size_t) {
        cells.push_back({f[0], f[1], f.size() > 2 ? f[2] : std::string()});
    });
    return build(std::move(sites), std::move(sectors), std::move(cells));
}

NetworkDB NetworkDB::load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
    std::vector<SiteRecord> sites;
    std::vector<SectorRecord> sectors;
    std::vector<CellRecord> cells;
    try {
        for (const auto& s : j.at("sites"))
            sites.push_back({s.at("site_id"), s.at("lat"), s.at("lon")});
        for (const auto& s : j.at("sectors"))
            sectors.push_back({s.at("sector_id"), s.at("site_id"), s.at("azimuth_start_deg"),
                               s.at("azimuth_span_deg")});
        for (const auto& c : j.at("cells"))
            cells.push_back({c.at("cell_id"), c.at("sector_id"),
                             c.value("frequency_tag", std::string())});
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
    return build(std::move(sites), std::move(sectors), std::move(cells));
}

void NetworkDB::save_csv_dir(const std::string& dir) const {
    std::filesystem::create_directories(dir);
    {
        std::ofstream out(dir + "/sites.csv");
        out << "site_id,lat,lon\n";
        out.precision(17);
        for (const auto& s : sites_) out << s.id << ',' << s.geo.lat << ',' << s.geo.lon << '\n';
    }
    {
        std::ofstream out(dir + "/sectors.csv");
        out << "sector_id,site_id,azimuth_start_deg,azimuth_span_deg\n";
        out.precision(17);
        for (const auto& s : sectors_)
            out << s.id << ',' << sites_[s.site_index].id << ',' << s.azimuth_start << ','
                << s.azimuth_span << '\n';
    }
    {
        std::ofstream out(dir + "/cells.csv");
        out << "cell_id,sector_id,frequency_tag\n";
        for (const auto& c : cells_)
            out << c.id << ',' << sectors_[c.sector_index].id << ',' << c.frequency_tag << '\n';
    }
}

void NetworkDB::save_json(const std::string& path) const {
    nlohmann::json j;
    j["sites"] = nlohmann::json::array();
    for (const auto& s : sites_)
        j["sites"].push_back({{"site_id", s.id}, {"lat", s.geo.lat}, {"lon", s.geo.lon}});
    j["sectors"] = nlohmann::json::array();
    for (const auto& s : sectors_)
        j["sectors"].push_back({{"sector_id", s.id},
                                {"site_id", sites_[s.site_index].id},
                                {"azimuth_start_deg", s.azimuth_start},
                                {"azimuth_span_deg", s.azimuth_span}});
    j["cells"] = nlohmann::json::array();
    for (const auto& c : cells_)
        j["cells"].push_back({{"cell_id", c.id},
                              {"sector_id", sectors_[c.sector_index].id},
                              {"frequency_tag", c.frequency_tag}});
    std::ofstream out(path);
    out << j.dump(2) << '\n';
}

std::optional<uint32_t> NetworkDB::find_cell(const std::string& cell_id) const {
    auto it = cell_index_.find(cell_id);
    if (it == cell_index_.end()) return std::nullopt;
    return it->second;
}

std::optional<uint32_t> NetworkDB::find_site(const std::string& site_id) const {
    auto it = site_index_.find(site_id);
    if (it == site_index_.end()) return std::nullopt;
    return it->second;
}

uint32_t NetworkDB::nearest_site(const PlanarPoint& p) const {
    double best = dist2(p, sites_[0].pos);
    for (size_t i = 1; i < sites_.size(); ++i) best = std::min(best, dist2(p, sites_[i].pos));
    // smallest id among sites within the tie tolerance of the minimum
    for (uint32_t i = 0; i < sites_.size(); ++i)
        if (dist2(p, sites_[i].pos) - best < kBisectorEps) return i;
    return 0;  // unreachable
}

bool NetworkDB::sector_contains(uint32_t sector_index, const PlanarPoint& p) const {
    const Sector& s = sectors_[sector_index];
    const PlanarPoint& site = sites_[s.site_index].pos;
    if (p.x == site.x && p.y == site.y) return true;  // bearing undefined at the site itself
    return azimuth_interval_contains(s.azimuth_start, s.azimuth_span, bearing_deg(site, p));
}

BisectorSide NetworkDB::bisector_side_sites(const PlanarPoint& p, uint32_t a, uint32_t b) const {
    if (a == b) throw ValidationError("bisector_side needs two distinct sites");
    return bisector_side(p, sites_[a].pos, sites_[b].pos);
}

uint32_t NetworkDB::closer_site(const PlanarPoint& p, uint32_t a, uint32_t b) const {
    switch (bisector_side_sites(p, a, b)) {
        case BisectorSide::CloserToA: return a;
        case BisectorSide::CloserToB: return b;
        case BisectorSide::OnBisector: return std::min(a, b);
    }
    return a;
}

void NetworkDB::default_bounding_box(double& min_x, double& min_y, double& max_x,
                                     double& max_y) const {
    min_x = min_y = std::numeric_limits<double>::max();
    max_x = max_y = std::numeric_limits<double>::lowest();
    for (const auto& s : sites_) {
        min_x = std::min(min_x, s.pos.x);
        max_x = std::max(max_x, s.pos.x);
        min_y = std::min(min_y, s.pos.y);
        max_y = std::max(max_y, s.pos.y);
    }
    double pad = 500.0;
    if (sites_.size() >= 2) {
        std::vector<double> nn;
        nn.reserve(sites_.size());
        for (size_t i = 0; i < sites_.size(); ++i) {
            double best = std::numeric_limits<double>::max();
            for (size_t j = 0; j < sites_.size(); ++j)
                if (i != j) best = std::min(best, dist2(sites_[i].pos, sites_[j].pos));
            nn.push_back(std::sqrt(best));
        }
        std::sort(nn.begin(), nn.end());
        pad = nn[nn.size() / 2];
    }
    min_x -= pad;
    min_y -= pad;
    max_x += pad;
    max_y += pad;
}

}  // namespace crescendo
