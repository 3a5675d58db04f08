// Acceptance suite: runs every acceptance criterion at its stated tolerance
// and prints one PASS/FAIL line per criterion. Exit code 0 iff all pass.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <vector>

#include "crescendo/evaluate.hpp"
#include "crescendo/locate.hpp"
#include "crescendo/network.hpp"
#include "crescendo/precompute.hpp"
#include "crescendo/simulate.hpp"

using namespace crescendo;
using Clock = std::chrono::steady_clock;

namespace {

struct Tally {
    bool all_ok = true;
    void report(int idx, const char* name, bool ok, const std::string& detail = "") {
        std::printf("%s  %d. %s%s%s\n", ok ? "PASS" : "FAIL", idx, name,
                    detail.empty() ? "" : " -- ", detail.c_str());
        all_ok = all_ok && ok;
    }
};

// Independent reference: localization recomputed per grid point from raw
// geometry, no precompute table involved.
LocationEstimate naive_localize(const Scan& scan, const GridSpec& spec, const NetworkDB& db) {
    ResolvedScan rs = resolve_scan(scan, db);
    OnlineConstraints oc = build_constraints(cluster_scan(rs, db), rs);
    LocationEstimate est;
    est.achievable_score = oc.achievable_score();

    std::vector<size_t> candidates;
    for (size_t r = 0; r < spec.n_points(); ++r)
        if (db.nearest_site(spec.point(r)) == oc.strongest_site) candidates.push_back(r);
    if (candidates.empty()) {
        est.fallback_used = true;
        for (size_t r = 0; r < spec.n_points(); ++r) candidates.push_back(r);
    }

    int best = -1;
    std::vector<size_t> argmax;
    for (size_t r : candidates) {
        const PlanarPoint p = spec.point(r);
        int score = 0;
        for (const auto& pr : oc.pairwise)
            if ((db.closer_site(p, pr.a, pr.b) == pr.a) == pr.closer_is_a) ++score;
        for (uint32_t c : oc.visible_cells)
            if (db.cell_contains(c, p)) ++score;
        if (score > best) {
            best = score;
            argmax.clear();
        }
        if (score == best) argmax.push_back(r);
    }
    double sx = 0, sy = 0;
    for (size_t r : argmax) {
        sx += spec.point(r).x;
        sy += spec.point(r).y;
    }
    est.max_score = best;
    est.n_max_points = argmax.size();
    est.position = {sx / static_cast<double>(argmax.size()),
                    sy / static_cast<double>(argmax.size())};
    return est;
}

// Criterion 1: table-backed localization bitwise equals the per-point
// geometric re-evaluation on >= 100 randomized small instances.
void criterion_oracle_equivalence(Tally& t) {
    const auto start = Clock::now();
    std::mt19937_64 meta(0xacce90);
    size_t instances = 0, scans_checked = 0;
    bool ok = true;
    std::string detail;
    for (int inst = 0; inst < 100 && ok; ++inst) {
        SimConfig cfg;
        cfg.n_sites = 2 + meta() % 14;  // up to 15 sites
        cfg.rng_seed = meta();
        cfg.mode = (inst % 2) ? SimMode::Noisy : SimMode::Ideal;
        cfg.min_x = cfg.min_y = 0.0;
        cfg.max_x = cfg.max_y = 600.0;
        NetworkDB db = generate_network(cfg);
        GridSpec spec = area_grid(cfg, db, 25.0);  // 25x25 grid
        PrecomputeTable table = PrecomputeTable::build(db, spec);
        Dataset ds = generate_dataset(db, cfg, 5);
        ++instances;
        for (const auto& sample : ds.samples) {
            LocationEstimate fast = localize(sample.scan, table, db);
            LocationEstimate ref = naive_localize(sample.scan, spec, db);
            ++scans_checked;
            if (fast.position.x != ref.position.x || fast.position.y != ref.position.y ||
                fast.max_score != ref.max_score || fast.n_max_points != ref.n_max_points ||
                fast.fallback_used != ref.fallback_used) {
                ok = false;
                detail = "mismatch on instance " + std::to_string(inst);
                break;
            }
        }
    }
    const double secs = std::chrono::duration<double>(Clock::now() - start).count();
    if (ok && secs >= 60.0) {
        ok = false;
        detail = "took " + std::to_string(secs) + " s (budget 60 s)";
    }
    if (ok)
        detail = std::to_string(instances) + " instances, " + std::to_string(scans_checked) +
                 " scans, " + std::to_string(secs) + " s";
    t.report(1, "oracle equivalence (table vs naive re-evaluation)", ok, detail);
}

// Distance from p to the boundary of the azimuth interval [start, start+span)
// seen from `site` (meters); large when span is the full circle.
double sector_margin(const PlanarPoint& p, const PlanarPoint& site, double start, double span) {
    if (span >= 360.0) return 1e18;
    const double r = dist(p, site);
    const double b = bearing_deg(site, p);
    auto ray_distance = [&](double ray_deg) {
        double delta = std::fabs(b - ray_deg);
        if (delta > 180.0) delta = 360.0 - delta;
        if (delta >= 90.0) return r;
        return r * std::sin(delta * kDegToRad);
    };
    return std::min(ray_distance(start), ray_distance(std::fmod(start + span, 360.0)));
}

// Signed distance from p to the bisector of (a, b); positive when p is on a's
// side.
double halfplane_margin(const PlanarPoint& p, const PlanarPoint& a, const PlanarPoint& b) {
    return (dist2(p, b) - dist2(p, a)) / (2.0 * dist(a, b));
}

// Criterion 2: ideal-mode soundness on 1000 samples whose truth lies at least
// one grid step inside every constraint-region boundary.
void criterion_ideal_soundness(Tally& t) {
    SimConfig cfg;
    cfg.n_sites = 12;
    cfg.min_x = cfg.min_y = 0.0;
    cfg.max_x = cfg.max_y = 1000.0;
    cfg.cells_per_sector = 1;
    cfg.mode = SimMode::Ideal;
    cfg.rng_seed = 2024;
    const double step = 25.0;
    NetworkDB db = generate_network(cfg);
    GridSpec spec = area_grid(cfg, db, step);
    PrecomputeTable table = PrecomputeTable::build(db, spec);

    size_t accepted = 0, score_ok = 0, error_ok = 0;
    size_t batch_index = 0;
    while (accepted < 1000 && batch_index < 100000) {
        std::mt19937_64 rng = sample_rng(cfg.rng_seed, batch_index++);
        std::uniform_real_distribution<double> ux(cfg.min_x, cfg.max_x);
        std::uniform_real_distribution<double> uy(cfg.min_y, cfg.max_y);
        const PlanarPoint anchor_pos{ux(rng), uy(rng)};
        const PlanarPoint truth = anchor_to_db_frame(anchor_pos, cfg, db);
        Scan scan = simulate_scan(truth, db, cfg, rng);
        if (scan.entries.empty()) continue;

        // interior filter: one grid step of margin on every constraint
        if (truth.x < spec.min_x + step || truth.x > spec.max_x - step ||
            truth.y < spec.min_y + step || truth.y > spec.max_y - step)
            continue;
        ResolvedScan rs = resolve_scan(scan, db);
        OnlineConstraints oc = build_constraints(cluster_scan(rs, db), rs);
        bool interior = true;
        const PlanarPoint strongest = db.sites()[oc.strongest_site].pos;
        for (uint32_t s = 0; s < db.n_sites() && interior; ++s)
            if (s != oc.strongest_site &&
                halfplane_margin(truth, strongest, db.sites()[s].pos) < step)
                interior = false;
        for (const auto& pr : oc.pairwise) {
            if (!interior) break;
            const PlanarPoint& closer = db.sites()[pr.closer_is_a ? pr.a : pr.b].pos;
            const PlanarPoint& farther = db.sites()[pr.closer_is_a ? pr.b : pr.a].pos;
            if (halfplane_margin(truth, closer, farther) < step) interior = false;
        }
        for (uint32_t c : oc.visible_cells) {
            if (!interior) break;
            const Sector& sec = db.sectors()[db.cells()[c].sector_index];
            if (sector_margin(truth, db.sites()[sec.site_index].pos, sec.azimuth_start,
                              sec.azimuth_span) < step)
                interior = false;
        }
        if (!interior) continue;
        ++accepted;

        // nearest grid point to truth must attain the achievable score
        const size_t ix = static_cast<size_t>(std::llround((truth.x - spec.min_x) / step));
        const size_t iy = static_cast<size_t>(std::llround((truth.y - spec.min_y) / step));
        const size_t r = iy * spec.nx() + ix;
        const bool candidate = table.voronoi_site(r) == oc.strongest_site;
        if (candidate && score_point(table, r, oc) == oc.achievable_score()) ++score_ok;

        LocationEstimate est = localize(rs, table, db);
        if (dist(est.position, truth) <= est.ambiguity_extent + step * std::sqrt(2.0)) ++error_ok;
    }
    const bool ok = accepted == 1000 && score_ok == accepted && error_ok == accepted;
    t.report(2, "ideal-mode soundness (max score at truth, bounded error)", ok,
             std::to_string(accepted) + " samples, " + std::to_string(score_ok) +
                 " with full score, " + std::to_string(error_ok) + " within error bound");
}

// Criterion 3: strictly increasing affine RSS transforms leave every
// estimated position bit-identical (500 noisy scans, 4 maps).
void criterion_monotone_invariance(Tally& t) {
    SimConfig cfg;
    cfg.n_sites = 13;
    cfg.min_x = cfg.min_y = 0.0;
    cfg.max_x = cfg.max_y = 707.0;
    cfg.mode = SimMode::Noisy;
    cfg.rng_seed = 33;
    NetworkDB db = generate_network(cfg);
    PrecomputeTable table = PrecomputeTable::build(db, area_grid(cfg, db, 50.0));
    Dataset ds = generate_dataset(db, cfg, 520);

    std::vector<std::pair<double, double>> maps{{2.0, 13.0}};
    std::mt19937_64 rng(0xaf1e);
    std::uniform_real_distribution<double> ua(0.25, 4.0), ub(-60.0, 60.0);
    for (int i = 0; i < 3; ++i) maps.emplace_back(ua(rng), ub(rng));

    size_t checked = 0;
    bool ok = true;
    for (const auto& sample : ds.samples) {
        if (checked >= 500) break;
        ++checked;
        LocationEstimate base = localize(sample.scan, table, db);
        for (const auto& [a, b] : maps) {
            Scan warped = sample.scan;
            for (auto& e : warped.entries) e.rss = a * e.rss + b;
            LocationEstimate est = localize(warped, table, db);
            if (est.position.x != base.position.x || est.position.y != base.position.y) {
                ok = false;
                break;
            }
        }
        if (!ok) break;
    }
    t.report(3, "monotone RSS-transform invariance", ok && checked >= 500,
             std::to_string(checked) + " scans x 4 maps");
}

// Criterion 4: on the dense synthetic benchmark the engine's median error is
// no worse than either baseline for at least 4 of 5 fixed seeds.
void criterion_method_comparison(Tally& t) {
    const auto start = Clock::now();
    int wins = 0;
    std::string detail;
    for (uint64_t seed = 1; seed <= 5; ++seed) {
        SimConfig cfg;
        cfg.min_x = cfg.min_y = 0.0;
        cfg.max_x = cfg.max_y = std::sqrt(0.5) * 1000.0;  // 0.5 km^2
        cfg.n_sites = 13;
        cfg.mode = SimMode::Noisy;
        cfg.rng_seed = seed;
        NetworkDB db = thin_network(generate_network(cfg), 112, seed);  // 224 cells/km^2
        PrecomputeTable table = PrecomputeTable::build(db, area_grid(cfg, db, 50.0));
        Dataset ds = generate_dataset(db, cfg, 2000);
        MethodComparison cmp = evaluate(ds.samples, table, db);
        const bool win = cmp.crescendo.median_m <= cmp.cell_id.median_m &&
                         cmp.crescendo.median_m <= cmp.centroid.median_m;
        wins += win ? 1 : 0;
        detail += (detail.empty() ? "" : ", ") + std::string("seed ") + std::to_string(seed) +
                  ": " + std::to_string(cmp.crescendo.median_m) + "/" +
                  std::to_string(cmp.cell_id.median_m) + "/" +
                  std::to_string(cmp.centroid.median_m);
    }
    const double secs = std::chrono::duration<double>(Clock::now() - start).count();
    const bool ok = wins >= 4 && secs < 300.0;
    t.report(4, "method-comparison trend (median vs Cell ID and Centroid)", ok,
             std::to_string(wins) + "/5 seeds, " + std::to_string(secs) + " s [" + detail + "]");
}

// Criterion 5: larger grid steps are strictly faster per estimate, and the
// coarsest grid is no more accurate than the finest.
void criterion_grid_trend(Tally& t) {
    SimConfig cfg;
    cfg.min_x = cfg.min_y = 0.0;
    cfg.max_x = cfg.max_y = std::sqrt(0.5) * 1000.0;
    cfg.n_sites = 13;
    cfg.mode = SimMode::Noisy;
    cfg.rng_seed = 7;
    NetworkDB db = generate_network(cfg);
    Dataset ds = generate_dataset(db, cfg, 2000);
    GridSpec box = area_grid(cfg, db, 50.0);
    auto rows = sweep_grid_size({25.0, 50.0, 100.0, 200.0}, db, box, ds.samples);
    bool runtime_ok = true;
    for (size_t i = 1; i < rows.size(); ++i)
        if (!(rows[i].mean_runtime_us < rows[i - 1].mean_runtime_us)) runtime_ok = false;
    const bool error_ok = rows.back().median_m >= rows.front().median_m;
    std::string detail;
    for (const auto& r : rows)
        detail += "step " + std::to_string(static_cast<int>(r.step)) + ": " +
                  std::to_string(r.median_m) + " m / " + std::to_string(r.mean_runtime_us) +
                  " us; ";
    t.report(5, "grid-size trend (runtime strictly decreasing, error non-improving)",
             runtime_ok && error_ok, detail);
}

// Criterion 6: median error non-increasing in density (10% single-step
// allowance) for 3 fixed seeds.
void criterion_density_trend(Tally& t) {
    bool ok = true;
    std::string detail;
    for (uint64_t seed = 1; seed <= 3; ++seed) {
        SimConfig cfg;
        cfg.min_x = cfg.min_y = 0.0;
        cfg.max_x = cfg.max_y = std::sqrt(0.5) * 1000.0;
        cfg.n_sites = 13;
        cfg.mode = SimMode::Noisy;
        cfg.rng_seed = seed;
        auto rows = sweep_density({21.0, 50.0, 100.0, 224.0}, cfg, 2000, 50.0);
        detail += "seed " + std::to_string(seed) + ":";
        for (const auto& r : rows)
            detail += " " + std::to_string(r.comparison.crescendo.median_m);
        detail += "; ";
        for (size_t i = 1; i < rows.size(); ++i)
            if (rows[i].comparison.crescendo.median_m >
                1.10 * rows[i - 1].comparison.crescendo.median_m)
                ok = false;
    }
    t.report(6, "density trend (median error non-increasing in density, 10% allowance)", ok,
             detail);
}

// Criterion 7: structural invariants, exhaustively on small instances.
void criterion_structural(Tally& t) {
    bool ok = true;
    std::string detail;
    for (uint64_t seed = 1; seed <= 5 && ok; ++seed) {
        SimConfig cfg;
        cfg.n_sites = 2 + seed;
        cfg.cells_per_sector = 2;
        cfg.rng_seed = seed;
        NetworkDB db = generate_network(cfg);
        GridSpec spec = area_grid(cfg, db, 60.0);
        PrecomputeTable table = PrecomputeTable::build(db, spec);
        const uint32_t n = db.n_sites();
        if (table.n_pairs() != static_cast<size_t>(n) * (n - 1) / 2) {
            ok = false;
            detail = "pair count";
            break;
        }
        for (size_t r = 0; r < table.n_records() && ok; ++r) {
            // sector closure
            for (const auto& cells : db.cells_of_sector()) {
                const bool first = table.cell_contained(r, cells[0]);
                for (uint32_t c : cells)
                    if (table.cell_contained(r, c) != first) {
                        ok = false;
                        detail = "sector closure";
                    }
            }
            // voronoi consistency with the pairwise table
            const uint32_t v = table.voronoi_site(r);
            for (uint32_t s = 0; s < n; ++s) {
                if (s == v) continue;
                const uint32_t i = std::min(v, s), j = std::max(v, s);
                const bool closer_i = table.pair_bit(r, PrecomputeTable::pair_index(i, j, n));
                if ((closer_i ? i : j) != v) {
                    ok = false;
                    detail = "voronoi/pairwise consistency";
                }
            }
        }
        if (!ok) break;
        // save/load round-trip
        const std::string path = "/tmp/crsc_acceptance_table.crsc";
        table.save(path);
        if (!(PrecomputeTable::load(path) == table)) {
            ok = false;
            detail = "save/load round-trip";
            break;
        }
        // full-pipeline seed determinism
        Dataset d1 = generate_dataset(db, cfg, 50);
        Dataset d2 = generate_dataset(db, cfg, 50);
        if (d1.samples.size() != d2.samples.size()) {
            ok = false;
            detail = "dataset determinism";
            break;
        }
        for (size_t i = 0; i < d1.samples.size(); ++i) {
            LocationEstimate e1 = localize(d1.samples[i].scan, table, db);
            LocationEstimate e2 = localize(d2.samples[i].scan, table, db);
            if (e1.position.x != e2.position.x || e1.position.y != e2.position.y) {
                ok = false;
                detail = "pipeline determinism";
                break;
            }
        }
    }
    t.report(7, "structural invariants (pairs, closure, consistency, round-trip, determinism)",
             ok, detail);
}

}  // namespace

int main() {
    Tally t;
    criterion_oracle_equivalence(t);
    criterion_ideal_soundness(t);
    criterion_monotone_invariance(t);
    criterion_method_comparison(t);
    criterion_grid_trend(t);
    criterion_density_trend(t);
    criterion_structural(t);
    std::printf("%s\n", t.all_ok ? "ALL ACCEPTANCE CRITERIA PASSED" : "ACCEPTANCE FAILURES");
    return t.all_ok ? 0 : 1;
}
