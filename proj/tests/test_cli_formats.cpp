#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "crescendo/errors.hpp"
#include "crescendo/scan.hpp"

using namespace crescendo;

namespace {

std::filesystem::path tmp_file(const char* name) {
    return std::filesystem::temp_directory_path() / name;
}

}  // namespace

TEST_CASE("scan csv round-trip") {
    std::vector<Scan> scans;
    Scan a;
    a.id = "s1";
    a.timestamp = "2021-04-01T10:00:00";
    a.ground_truth = GeoPoint{30.05, 31.2};
    a.entries = {{"c1", -61.5}, {"c2", -80.0}};
    Scan b;
    b.id = "s2";
    b.entries = {{"c9", -99.0}};
    scans = {a, b};
    auto path = tmp_file("crsc_scans_rt.csv");
    save_scans(path.string(), scans);
    auto back = load_scans(path.string());
    REQUIRE(back.size() == 2);
    CHECK(back[0].id == "s1");
    CHECK(back[0].timestamp == "2021-04-01T10:00:00");
    REQUIRE(back[0].ground_truth.has_value());
    CHECK(back[0].ground_truth->lat == doctest::Approx(30.05));
    REQUIRE(back[0].entries.size() == 2);
    CHECK(back[0].entries[1].cell_id == "c2");
    CHECK(back[0].entries[1].rss == -80.0);
    CHECK_FALSE(back[1].ground_truth.has_value());
    std::filesystem::remove(path);
}

TEST_CASE("scan csv with empty trailing slots and unknown ground truth") {
    auto path = tmp_file("crsc_scans_manual.csv");
    std::ofstream(path) << "scan_id,timestamp,true_lat,true_lon,cell_id_1,rss_1,cell_id_2,rss_2,"
                           "cell_id_3,rss_3,cell_id_4,rss_4,cell_id_5,rss_5,cell_id_6,rss_6,"
                           "cell_id_7,rss_7\n"
                           "s7,,,,c1,-70,,,,,,,,,,,,\n";
    auto scans = load_scans(path.string());
    REQUIRE(scans.size() == 1);
    CHECK_FALSE(scans[0].ground_truth.has_value());
    REQUIRE(scans[0].entries.size() == 1);
    CHECK(scans[0].entries[0].cell_id == "c1");
    std::filesystem::remove(path);
}

TEST_CASE("scan csv rejects duplicates, empties and oversized scans") {
    auto path = tmp_file("crsc_scans_bad.csv");
    std::ofstream(path) << "scan_id,timestamp,true_lat,true_lon,cell_id_1,rss_1,cell_id_2,rss_2\n"
                           "s1,,,,c1,-70,c1,-75\n";
    CHECK_THROWS_AS(load_scans(path.string()), ParseError);

    std::ofstream(path) << "scan_id,timestamp,true_lat,true_lon,cell_id_1,rss_1\n"
                           "s1,,,,,\n";
    CHECK_THROWS_AS(load_scans(path.string()), ParseError);

    std::ofstream(path) << "scan_id,timestamp,true_lat,true_lon,cell_id_1,rss_1\n"
                           "s1,,,,c1,minus70\n";
    CHECK_THROWS_AS(load_scans(path.string()), ParseError);
    std::filesystem::remove(path);
}
