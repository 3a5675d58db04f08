#include "crescendo/simulate.hpp"

#include <algorithm>
#include <cmath>

#include "crescendo/errors.hpp"
#include "crescendo/parallel.hpp"

namespace crescendo {

namespace {

uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

std::string padded_id(const char* prefix, size_t i) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%s%04zu", prefix, i);
    return buf;
}

}  // namespace

size_t SimConfig::sites_for_density(double cells_per_km2, double area_km2,
                                    size_t sectors_per_site, size_t cells_per_sector) {
    const double cells = cells_per_km2 * area_km2;
    const double per_site = static_cast<double>(sectors_per_site * cells_per_sector);
    return std::max<size_t>(1, static_cast<size_t>(std::llround(cells / per_site)));
}

void to_json(nlohmann::json& j, const PropagationParams& p) {
    j = {{"tx_power_dbm", p.tx_power},
         {"path_loss_exponent", p.path_loss_exponent},
         {"shadowing_sigma_db", p.shadowing_sigma},
         {"out_of_sector_penalty_db", p.out_of_sector_penalty},
         {"detection_threshold_dbm", p.detection_threshold},
         {"max_visible", p.max_visible}};
}

void from_json(const nlohmann::json& j, PropagationParams& p) {
    PropagationParams d;
    p.tx_power = j.value("tx_power_dbm", d.tx_power);
    p.path_loss_exponent = j.value("path_loss_exponent", d.path_loss_exponent);
    p.shadowing_sigma = j.value("shadowing_sigma_db", d.shadowing_sigma);
    p.out_of_sector_penalty = j.value("out_of_sector_penalty_db", d.out_of_sector_penalty);
    p.detection_threshold = j.value("detection_threshold_dbm", d.detection_threshold);
    p.max_visible = j.value("max_visible", d.max_visible);
    if (!(p.path_loss_exponent > 0.0)) throw ValidationError("path_loss_exponent must be > 0");
    if (p.shadowing_sigma < 0.0) throw ValidationError("shadowing_sigma must be >= 0");
}

void to_json(nlohmann::json& j, const SimConfig& c) {
    j = {{"area", {{"min_x", c.min_x}, {"min_y", c.min_y}, {"max_x", c.max_x}, {"max_y", c.max_y}}},
         {"n_sites", c.n_sites},
         {"sectors_per_site", c.sectors_per_site},
         {"cells_per_sector", c.cells_per_sector},
         {"placement", c.placement == Placement::HexLattice ? "hex-lattice" : "uniform-random"},
         {"rng_seed", c.rng_seed},
         {"mode", c.mode == SimMode::Ideal ? "ideal" : "noisy"},
         {"propagation", c.propagation},
         {"geo_anchor", {{"lat", c.geo_anchor.lat}, {"lon", c.geo_anchor.lon}}}};
}

void from_json(const nlohmann::json& j, SimConfig& c) {
    SimConfig d;
    if (j.contains("area")) {
        const auto& a = j.at("area");
        c.min_x = a.value("min_x", d.min_x);
        c.min_y = a.value("min_y", d.min_y);
        c.max_x = a.value("max_x", d.max_x);
        c.max_y = a.value("max_y", d.max_y);
    }
    c.n_sites = j.value("n_sites", d.n_sites);
    c.sectors_per_site = j.value("sectors_per_site", d.sectors_per_site);
    c.cells_per_sector = j.value("cells_per_sector", d.cells_per_sector);
    const std::string placement = j.value("placement", "uniform-random");
    if (placement == "hex-lattice")
        c.placement = Placement::HexLattice;
    else if (placement == "uniform-random")
        c.placement = Placement::UniformRandom;
    else
        throw ValidationError("unknown placement '" + placement + "'");
    c.rng_seed = j.value("rng_seed", d.rng_seed);
    const std::string mode = j.value("mode", "noisy");
    if (mode == "ideal")
        c.mode = SimMode::Ideal;
    else if (mode == "noisy")
        c.mode = SimMode::Noisy;
    else
        throw ValidationError("unknown mode '" + mode + "'");
    if (j.contains("propagation")) c.propagation = j.at("propagation").get<PropagationParams>();
    if (j.contains("geo_anchor")) {
        c.geo_anchor.lat = j.at("geo_anchor").value("lat", d.geo_anchor.lat);
        c.geo_anchor.lon = j.at("geo_anchor").value("lon", d.geo_anchor.lon);
    }
    if (c.n_sites == 0) throw ValidationError("n_sites must be > 0");
    if (c.sectors_per_site == 0 || c.cells_per_sector == 0)
        throw ValidationError("sectors_per_site and cells_per_sector must be > 0");
    if (!(c.max_x > c.min_x) || !(c.max_y > c.min_y))
        throw ValidationError("simulation area is empty");
}

NetworkDB generate_network(const SimConfig& cfg) {
    if (cfg.n_sites == 0) throw ValidationError("n_sites must be > 0");
    std::mt19937_64 rng(splitmix64(cfg.rng_seed));
    const double w = cfg.max_x - cfg.min_x;
    const double h = cfg.max_y - cfg.min_y;

    std::vector<PlanarPoint> positions;
    if (cfg.placement == Placement::UniformRandom) {
        std::uniform_real_distribution<double> ux(cfg.min_x, cfg.max_x);
        std::uniform_real_distribution<double> uy(cfg.min_y, cfg.max_y);
        for (size_t i = 0; i < cfg.n_sites; ++i) positions.push_back({ux(rng), uy(rng)});
    } else {
        // hex lattice sized so at least n_sites fit, then the first n kept
        const double cell_area = w * h / static_cast<double>(cfg.n_sites);
        const double dx = std::sqrt(cell_area / (std::sqrt(3.0) / 2.0));
        const double dy = dx * std::sqrt(3.0) / 2.0;
        for (size_t row = 0; positions.size() < cfg.n_sites; ++row) {
            const double y = cfg.min_y + dy / 2.0 + row * dy;
            const double off = (row % 2 == 0) ? dx / 2.0 : dx;
            for (double x = cfg.min_x + off; x < cfg.max_x && positions.size() < cfg.n_sites;
                 x += dx)
                positions.push_back({x, y});
            if (row > 4 * cfg.n_sites) break;  // degenerate box guard
        }
    }

    std::uniform_real_distribution<double> urot(0.0, 360.0);
    std::vector<double> rotations;
    for (size_t i = 0; i < positions.size(); ++i) rotations.push_back(urot(rng));

    std::vector<SiteRecord> sites;
    std::vector<SectorRecord> sectors;
    std::vector<CellRecord> cells;
    const double span = 360.0 / static_cast<double>(cfg.sectors_per_site);
    for (size_t i = 0; i < positions.size(); ++i) {
        const std::string sid = padded_id("S", i);
        const GeoPoint geo = unproject(positions[i], cfg.geo_anchor);
        sites.push_back({sid, geo.lat, geo.lon});
        for (size_t k = 0; k < cfg.sectors_per_site; ++k) {
            double start = std::fmod(rotations[i] + k * span, 360.0);
            const std::string secid = sid + "_s" + std::to_string(k);
            sectors.push_back({secid, sid, start, span});
            for (size_t c = 0; c < cfg.cells_per_sector; ++c)
                cells.push_back({secid + "_c" + std::to_string(c), secid,
                                 "f" + std::to_string(c)});
        }
    }
    return NetworkDB::build(std::move(sites), std::move(sectors), std::move(cells));
}

PlanarPoint anchor_to_db_frame(const PlanarPoint& p, const SimConfig& cfg, const NetworkDB& db) {
    return project(unproject(p, cfg.geo_anchor), db.projection_origin());
}

GridSpec area_grid(const SimConfig& cfg, const NetworkDB& db, double step) {
    const PlanarPoint lo = anchor_to_db_frame({cfg.min_x, cfg.min_y}, cfg, db);
    const PlanarPoint hi = anchor_to_db_frame({cfg.max_x, cfg.max_y}, cfg, db);
    GridSpec spec;
    spec.min_x = std::min(lo.x, hi.x);
    spec.max_x = std::max(lo.x, hi.x);
    spec.min_y = std::min(lo.y, hi.y);
    spec.max_y = std::max(lo.y, hi.y);
    spec.step = step;
    return spec;
}

std::optional<double> simulate_rss(const PlanarPoint& p, uint32_t cell, const NetworkDB& db,
                                   const PropagationParams& params, SimMode mode,
                                   std::mt19937_64& rng) {
    const bool in_sector = db.cell_contains(cell, p);
    double shadow = 0.0;
    if (mode == SimMode::Noisy && params.shadowing_sigma > 0.0) {
        // drawn for every cell so the stream position is independent of
        // visibility outcomes
        std::normal_distribution<double> noise(0.0, params.shadowing_sigma);
        shadow = noise(rng);
    }
    if (mode == SimMode::Ideal && !in_sector) return std::nullopt;
    const PlanarPoint& site = db.sites()[db.site_of_cell(cell)].pos;
    const double d = std::max(dist(p, site), 1.0);
    double rss = params.tx_power - 10.0 * params.path_loss_exponent * std::log10(d) + shadow;
    if (!in_sector) rss -= params.out_of_sector_penalty;
    if (rss < params.detection_threshold) return std::nullopt;
    return rss;
}

Scan simulate_scan(const PlanarPoint& p, const NetworkDB& db, const SimConfig& cfg,
                   std::mt19937_64& rng) {
    std::vector<std::pair<uint32_t, double>> heard;
    for (uint32_t c = 0; c < db.n_cells(); ++c)
        if (auto rss = simulate_rss(p, c, db, cfg.propagation, cfg.mode, rng))
            heard.emplace_back(c, *rss);

    if (cfg.mode == SimMode::Ideal) {
        // at most one cell per site: keep the strongest, ties to the smaller id
        std::vector<std::pair<uint32_t, double>> per_site;
        for (const auto& [c, rss] : heard) {
            const uint32_t site = db.site_of_cell(c);
            bool found = false;
            for (auto& best : per_site) {
                if (db.site_of_cell(best.first) != site) continue;
                found = true;
                if (rss > best.second) best = {c, rss};
                break;
            }
            if (!found) per_site.emplace_back(c, rss);
        }
        heard = std::move(per_site);
    }

    std::sort(heard.begin(), heard.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    if (heard.size() > cfg.propagation.max_visible) heard.resize(cfg.propagation.max_visible);

    Scan scan;
    for (const auto& [c, rss] : heard) scan.entries.push_back({db.cells()[c].id, rss});
    return scan;
}

std::mt19937_64 sample_rng(uint64_t seed, uint64_t index) {
    return std::mt19937_64(splitmix64(splitmix64(seed) ^ splitmix64(index + 0x51ed2701)));
}

Dataset generate_dataset(const NetworkDB& db, const SimConfig& cfg, size_t n_samples) {
    std::vector<std::optional<GroundTruthSample>> slots(n_samples);
    parallel_for(n_samples, 0, [&](size_t i) {
        std::mt19937_64 rng = sample_rng(cfg.rng_seed, i);
        std::uniform_real_distribution<double> ux(cfg.min_x, cfg.max_x);
        std::uniform_real_distribution<double> uy(cfg.min_y, cfg.max_y);
        const PlanarPoint anchor_pos{ux(rng), uy(rng)};
        const PlanarPoint p = anchor_to_db_frame(anchor_pos, cfg, db);
        Scan scan = simulate_scan(p, db, cfg, rng);
        if (scan.entries.empty()) return;  // no coverage
        scan.id = "s" + std::to_string(i);
        scan.ground_truth = unproject(p, db.projection_origin());
        slots[i] = GroundTruthSample{p, std::move(scan)};
    });
    Dataset out;
    for (auto& s : slots) {
        if (s)
            out.samples.push_back(std::move(*s));
        else
            ++out.no_coverage;
    }
    return out;
}

NetworkDB thin_network(const NetworkDB& db, size_t target_cells, uint64_t seed) {
    if (target_cells == 0) throw ValidationError("target cell count must be > 0");
    if (target_cells > db.n_cells())
        throw ValidationError("target cell count exceeds the network's cell count");
    std::vector<uint32_t> order(db.n_cells());
    for (uint32_t i = 0; i < db.n_cells(); ++i) order[i] = i;
    std::mt19937_64 rng(splitmix64(seed ^ 0xce11d20bull));
    std::shuffle(order.begin(), order.end(), rng);
    order.resize(target_cells);
    std::sort(order.begin(), order.end());

    std::vector<SiteRecord> sites;
    std::vector<SectorRecord> sectors;
    std::vector<CellRecord> cells;
    std::vector<bool> site_kept(db.sites().size(), false);
    std::vector<bool> sector_kept(db.sectors().size(), false);
    for (uint32_t c : order) {
        const Cell& cell = db.cells()[c];
        const Sector& sec = db.sectors()[cell.sector_index];
        cells.push_back({cell.id, sec.id, cell.frequency_tag});
        sector_kept[cell.sector_index] = true;
        site_kept[sec.site_index] = true;
    }
    for (uint32_t s = 0; s < db.sectors().size(); ++s)
        if (sector_kept[s]) {
            const Sector& sec = db.sectors()[s];
            sectors.push_back({sec.id, db.sites()[sec.site_index].id, sec.azimuth_start,
                               sec.azimuth_span});
        }
    for (uint32_t s = 0; s < db.sites().size(); ++s)
        if (site_kept[s]) {
            const Site& site = db.sites()[s];
            sites.push_back({site.id, site.geo.lat, site.geo.lon});
        }
    return NetworkDB::build(std::move(sites), std::move(sectors), std::move(cells));
}

}  // namespace crescendo
