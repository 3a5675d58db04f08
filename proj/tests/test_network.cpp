#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "crescendo/errors.hpp"
#include "crescendo/network.hpp"
#include "crescendo/simulate.hpp"

using namespace crescendo;

namespace {

// Two sites ~1 km apart, 3 sectors each, 1 cell per sector.
NetworkDB two_site_db() {
    std::vector<SiteRecord> sites{{"A", 30.0, 31.0}, {"B", 30.0, 31.0104}};
    std::vector<SectorRecord> sectors;
    std::vector<CellRecord> cells;
    for (const char* s : {"A", "B"})
        for (int k = 0; k < 3; ++k) {
            std::string sec = std::string(s) + "_s" + std::to_string(k);
            sectors.push_back({sec, s, k * 120.0, 120.0});
            cells.push_back({sec + "_c0", sec, "f0"});
        }
    return NetworkDB::build(sites, sectors, cells);
}

}  // namespace

TEST_CASE("build counts sites, sectors and cells") {
    NetworkDB db = two_site_db();
    CHECK(db.sites().size() == 2);
    CHECK(db.sectors().size() == 6);
    CHECK(db.cells().size() == 6);
    // origin is the centroid of the site coordinates
    CHECK(db.projection_origin().lat == doctest::Approx(30.0));
    CHECK(db.projection_origin().lon == doctest::Approx(31.0052));
}

TEST_CASE("dangling sector reference is a validation error naming the id") {
    std::vector<SiteRecord> sites{{"A", 30.0, 31.0}};
    std::vector<SectorRecord> sectors{{"S1", "A", 0.0, 360.0}};
    std::vector<CellRecord> cells{{"c1", "S9", "f0"}};
    try {
        NetworkDB::build(sites, sectors, cells);
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        CHECK(std::string(e.what()).find("S9") != std::string::npos);
    }
}

TEST_CASE("duplicate ids and empty sites are rejected") {
    CHECK_THROWS_AS(NetworkDB::build({{"A", 0, 0}, {"A", 1, 1}}, {{"s", "A", 0, 360}},
                                     {{"c", "s", ""}}),
                    ValidationError);
    CHECK_THROWS_AS(NetworkDB::build({{"A", 0, 0}}, {}, {}), ValidationError);
    // sector without a cell
    CHECK_THROWS_AS(NetworkDB::build({{"A", 0, 0}}, {{"s", "A", 0, 360}}, {}), ValidationError);
}

TEST_CASE("csv and json round-trips preserve the fingerprint") {
    NetworkDB db = two_site_db();
    auto dir = std::filesystem::temp_directory_path() / "crsc_net_rt";
    std::filesystem::remove_all(dir);
    db.save_csv_dir(dir.string());
    NetworkDB from_csv = NetworkDB::load(dir.string());
    CHECK(from_csv.fingerprint() == db.fingerprint());

    auto jpath = dir / "net.json";
    db.save_json(jpath.string());
    NetworkDB from_json = NetworkDB::load(jpath.string());
    CHECK(from_json.fingerprint() == db.fingerprint());
    std::filesystem::remove_all(dir);
}

TEST_CASE("malformed csv rows report the line number") {
    auto dir = std::filesystem::temp_directory_path() / "crsc_net_bad";
    std::filesystem::create_directories(dir);
    std::ofstream(dir / "sites.csv") << "site_id,lat,lon\nA,30.0,not_a_number\n";
    std::ofstream(dir / "sectors.csv") << "sector_id,site_id,azimuth_start_deg,azimuth_span_deg\n";
    std::ofstream(dir / "cells.csv") << "cell_id,sector_id,frequency_tag\n";
    try {
        NetworkDB::load_csv_dir(dir.string());
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find(":2") != std::string::npos);
    }
    std::filesystem::remove_all(dir);
}

TEST_CASE("urban-scale synthetic file loads") {
    // density matching the dense testbed: 224 cells/km^2 over 0.507 km^2
    SimConfig cfg;
    const double side = std::sqrt(0.507) * 1000.0;
    cfg.max_x = cfg.max_y = side;
    cfg.n_sites = 13;  // 13 * 9 = 117 cells ~ 224/km^2
    cfg.rng_seed = 3;
    NetworkDB db = generate_network(cfg);
    auto dir = std::filesystem::temp_directory_path() / "crsc_net_urban";
    std::filesystem::remove_all(dir);
    db.save_csv_dir(dir.string());
    NetworkDB loaded = NetworkDB::load(dir.string());
    CHECK(loaded.n_cells() == 117);
    CHECK(loaded.fingerprint() == db.fingerprint());
    std::filesystem::remove_all(dir);
}

TEST_CASE("sector containment follows the half-open azimuth interval") {
    NetworkDB db = two_site_db();
    // A's sector 0 covers [0, 120) at site A
    const PlanarPoint a = db.sites()[0].pos;
    CHECK(db.sector_contains(0, {a.x, a.y + 100}));         // bearing 0
    CHECK_FALSE(db.sector_contains(0, {a.x, a.y - 100}));   // bearing 180
    CHECK(db.sector_contains(0, a));                        // site itself, by convention
    // exactly one of the three sectors contains any bearing
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-500.0, 500.0);
    for (int i = 0; i < 200; ++i) {
        PlanarPoint p{a.x + u(rng), a.y + u(rng)};
        int hits = 0;
        for (int s = 0; s < 3; ++s) hits += db.sector_contains(s, p) ? 1 : 0;
        CHECK(hits == 1);
    }
}

TEST_CASE("wraparound sector") {
    std::vector<SiteRecord> sites{{"A", 0.0, 0.0}};
    std::vector<SectorRecord> sectors{{"s", "A", 300.0, 120.0}};
    std::vector<CellRecord> cells{{"c", "s", ""}};
    NetworkDB db = NetworkDB::build(sites, sectors, cells);
    CHECK(db.sector_contains(0, {0, 100}));  // bearing 0 in [300, 60)
    CHECK_FALSE(db.sector_contains(0, {100, 0}));
}

TEST_CASE("nearest site matches brute force and breaks ties by id") {
    std::vector<SiteRecord> sites{{"A", 30.0, 31.0}, {"B", 30.0, 31.001039}};
    std::vector<SectorRecord> sectors{{"a", "A", 0, 360}, {"b", "B", 0, 360}};
    std::vector<CellRecord> cells{{"ca", "a", ""}, {"cb", "b", ""}};
    NetworkDB db = NetworkDB::build(sites, sectors, cells);
    const PlanarPoint a = db.sites()[0].pos, b = db.sites()[1].pos;
    CHECK(db.nearest_site({a.x + 10, a.y}) == 0);
    CHECK(db.nearest_site({(a.x + b.x) / 2, a.y}) == 0);  // equidistant, tie to "A"

    SimConfig cfg;
    cfg.n_sites = 20;
    cfg.rng_seed = 99;
    NetworkDB big = generate_network(cfg);
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-400.0, 400.0);
    for (int i = 0; i < 100; ++i) {
        PlanarPoint p{u(rng), u(rng)};
        uint32_t best = 0;
        double best_d = dist2(p, big.sites()[0].pos);
        for (uint32_t s = 1; s < big.n_sites(); ++s) {
            double d = dist2(p, big.sites()[s].pos);
            if (d < best_d) {
                best_d = d;
                best = s;
            }
        }
        CHECK(big.nearest_site(p) == best);
    }
}

TEST_CASE("nearest site is consistent with the pairwise predicate") {
    SimConfig cfg;
    cfg.n_sites = 12;
    cfg.rng_seed = 17;
    NetworkDB db = generate_network(cfg);
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> u(-400.0, 400.0);
    for (int i = 0; i < 200; ++i) {
        PlanarPoint p{u(rng), u(rng)};
        const uint32_t s = db.nearest_site(p);
        for (uint32_t t = 0; t < db.n_sites(); ++t) {
            if (t == s) continue;
            CHECK(db.bisector_side_sites(p, s, t) != BisectorSide::CloserToB);
        }
    }
}

TEST_CASE("bisector_side rejects a site paired with itself") {
    NetworkDB db = two_site_db();
    CHECK_THROWS_AS(db.bisector_side_sites({0, 0}, 1, 1), ValidationError);
}
