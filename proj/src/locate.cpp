#include "crescendo/locate.hpp"

#include <algorithm>
#include <limits>

#include "crescendo/errors.hpp"

namespace crescendo {

ResolvedScan resolve_scan(const Scan& scan, const NetworkDB& db) {
    ResolvedScan out;
    for (const auto& e : scan.entries) {
        if (auto c = db.find_cell(e.cell_id))
            out.entries.emplace_back(*c, e.rss);
        else
            ++out.dropped;
    }
    return out;
}

RepresentativeSiteSet cluster_scan(const ResolvedScan& scan, const NetworkDB& db) {
    if (scan.entries.empty()) throw NoUsableCellsError("scan has no resolvable entries");
    RepresentativeSiteSet reps;
    for (const auto& [cell, rss] : scan.entries) {
        const uint32_t site = db.site_of_cell(cell);
        auto it = reps.find(site);
        if (it == reps.end()) {
            reps[site] = {cell, rss};
        } else if (rss > it->second.rss ||
                   (rss == it->second.rss && cell < it->second.cell_index)) {
            it->second = {cell, rss};
        }
    }
    return reps;
}

RepresentativeSiteSet cluster_scan(const Scan& scan, const NetworkDB& db) {
    return cluster_scan(resolve_scan(scan, db), db);
}

OnlineConstraints build_constraints(const RepresentativeSiteSet& reps, const ResolvedScan& scan) {
    if (reps.empty()) throw NoUsableCellsError("no representative sites");
    OnlineConstraints oc;

    auto stronger = [&](uint32_t a, uint32_t b) {
        const double ra = reps.at(a).rss, rb = reps.at(b).rss;
        if (ra != rb) return ra > rb ? a : b;
        return std::min(a, b);
    };

    auto it = reps.begin();
    oc.strongest_site = it->first;
    for (++it; it != reps.end(); ++it)
        oc.strongest_site = stronger(oc.strongest_site, it->first);

    for (auto i = reps.begin(); i != reps.end(); ++i) {
        auto j = i;
        for (++j; j != reps.end(); ++j)
            oc.pairwise.push_back({i->first, j->first, stronger(i->first, j->first) == i->first});
    }

    for (const auto& [cell, rss] : scan.entries) oc.visible_cells.push_back(cell);
    std::sort(oc.visible_cells.begin(), oc.visible_cells.end());
    return oc;
}

int score_point(const PrecomputeTable& table, size_t record, const OnlineConstraints& oc) {
    int score = 0;
    const uint32_t n = table.n_sites();
    for (const auto& pr : oc.pairwise) {
        const bool table_says_a = table.pair_bit(record, PrecomputeTable::pair_index(pr.a, pr.b, n));
        if (table_says_a == pr.closer_is_a) ++score;
    }
    for (uint32_t c : oc.visible_cells)
        if (table.cell_contained(record, c)) ++score;
    return score;
}

LocationEstimate localize(const ResolvedScan& scan, const PrecomputeTable& table,
                          const NetworkDB& db) {
    table.check_matches(db);
    const RepresentativeSiteSet reps = cluster_scan(scan, db);
    const OnlineConstraints oc = build_constraints(reps, scan);

    LocationEstimate est;
    est.achievable_score = oc.achievable_score();
    est.dropped_entries = scan.dropped;

    const size_t n_records = table.n_records();
    std::vector<size_t> candidates;
    for (size_t r = 0; r < n_records; ++r)
        if (table.voronoi_site(r) == oc.strongest_site) candidates.push_back(r);
    if (candidates.empty()) {
        est.fallback_used = true;
        candidates.resize(n_records);
        for (size_t r = 0; r < n_records; ++r) candidates[r] = r;
    }

    int best = -1;
    std::vector<size_t> argmax;
    for (size_t r : candidates) {
        const int s = score_point(table, r, oc);
        if (s > best) {
            best = s;
            argmax.clear();
        }
        if (s == best) argmax.push_back(r);
    }

    double sx = 0.0, sy = 0.0;
    double min_x = std::numeric_limits<double>::max(), min_y = min_x;
    double max_x = std::numeric_limits<double>::lowest(), max_y = max_x;
    for (size_t r : argmax) {
        const PlanarPoint p = table.spec().point(r);
        sx += p.x;
        sy += p.y;
        min_x = std::min(min_x, p.x);
        max_x = std::max(max_x, p.x);
        min_y = std::min(min_y, p.y);
        max_y = std::max(max_y, p.y);
    }
    est.max_score = best;
    est.n_max_points = argmax.size();
    est.position = {sx / static_cast<double>(argmax.size()),
                    sy / static_cast<double>(argmax.size())};
    est.geo = unproject(est.position, db.projection_origin());
    const double w = max_x - min_x, h = max_y - min_y;
    est.ambiguity_extent = std::sqrt(w * w + h * h);
    return est;
}

LocationEstimate localize(const Scan& scan, const PrecomputeTable& table, const NetworkDB& db) {
    return localize(resolve_scan(scan, db), table, db);
}

PlanarPoint cell_id_baseline(const ResolvedScan& scan, const NetworkDB& db) {
    if (scan.entries.empty()) throw NoUsableCellsError("scan has no resolvable entries");
    uint32_t best_cell = scan.entries[0].first;
    double best_rss = scan.entries[0].second;
    for (const auto& [cell, rss] : scan.entries)
        if (rss > best_rss || (rss == best_rss && cell < best_cell)) {
            best_cell = cell;
            best_rss = rss;
        }
    return db.sites()[db.site_of_cell(best_cell)].pos;
}

PlanarPoint centroid_baseline(const ResolvedScan& scan, const NetworkDB& db) {
    if (scan.entries.empty()) throw NoUsableCellsError("scan has no resolvable entries");
    std::vector<uint32_t> sites;
    for (const auto& [cell, rss] : scan.entries) sites.push_back(db.site_of_cell(cell));
    std::sort(sites.begin(), sites.end());
    sites.erase(std::unique(sites.begin(), sites.end()), sites.end());
    double sx = 0.0, sy = 0.0;
    for (uint32_t s : sites) {
        sx += db.sites()[s].pos.x;
        sy += db.sites()[s].pos.y;
    }
    return {sx / static_cast<double>(sites.size()), sy / static_cast<double>(sites.size())};
}

PlanarPoint cell_id_baseline(const Scan& scan, const NetworkDB& db) {
    return cell_id_baseline(resolve_scan(scan, db), db);
}

PlanarPoint centroid_baseline(const Scan& scan, const NetworkDB& db) {
    return centroid_baseline(resolve_scan(scan, db), db);
}

}  // namespace crescendo
