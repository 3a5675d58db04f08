#include <doctest.h>

#include <random>

#include "crescendo/geometry.hpp"

using namespace crescendo;

TEST_CASE("projection of the origin is (0,0)") {
    GeoPoint origin{30.0, 31.0};
    PlanarPoint p = project(origin, origin);
    CHECK(p.x == doctest::Approx(0.0));
    CHECK(p.y == doctest::Approx(0.0));
}

TEST_CASE("projection matches hand-evaluated equirectangular formula") {
    // 0.001 deg north of origin: y = 0.001 * R * pi/180 = 111.194926...
    GeoPoint origin{30.0, 31.0};
    PlanarPoint north = project({30.001, 31.0}, origin);
    CHECK(north.x == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(north.y == doctest::Approx(111.19492664).epsilon(1e-8));

    // 0.001 deg east at lat 30: x = 0.001 * cos(30 deg) * R * pi/180 = 96.29895...
    PlanarPoint east = project({30.0, 31.001}, origin);
    CHECK(east.x == doctest::Approx(111.19492664 * std::cos(30.0 * kDegToRad)).epsilon(1e-8));
    CHECK(east.y == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("project/unproject round-trips within 1e-6 m inside 2 km") {
    GeoPoint origin{30.0, 31.0};
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> u(-2000.0, 2000.0);
    for (int i = 0; i < 1000; ++i) {
        PlanarPoint p{u(rng), u(rng)};
        PlanarPoint q = project(unproject(p, origin), origin);
        CHECK(std::fabs(q.x - p.x) < 1e-6);
        CHECK(std::fabs(q.y - p.y) < 1e-6);
    }
}

TEST_CASE("bearing is measured clockwise from north") {
    PlanarPoint o{0, 0};
    CHECK(bearing_deg(o, {0, 100}) == doctest::Approx(0.0));
    CHECK(bearing_deg(o, {100, 0}) == doctest::Approx(90.0));
    CHECK(bearing_deg(o, {0, -100}) == doctest::Approx(180.0));
    CHECK(bearing_deg(o, {-100, 0}) == doctest::Approx(270.0));
}

TEST_CASE("bisector side predicate") {
    PlanarPoint a{0, 0}, b{100, 0};
    CHECK(bisector_side({10, 0}, a, b) == BisectorSide::CloserToA);
    CHECK(bisector_side({90, 0}, a, b) == BisectorSide::CloserToB);
    CHECK(bisector_side({50, 123}, a, b) == BisectorSide::OnBisector);
}

TEST_CASE("bisector side is antisymmetric") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-1000.0, 1000.0);
    for (int i = 0; i < 500; ++i) {
        PlanarPoint p{u(rng), u(rng)}, a{u(rng), u(rng)}, b{u(rng), u(rng)};
        BisectorSide ab = bisector_side(p, a, b);
        BisectorSide ba = bisector_side(p, b, a);
        switch (ab) {
            case BisectorSide::CloserToA: CHECK(ba == BisectorSide::CloserToB); break;
            case BisectorSide::CloserToB: CHECK(ba == BisectorSide::CloserToA); break;
            case BisectorSide::OnBisector: CHECK(ba == BisectorSide::OnBisector); break;
        }
    }
}

TEST_CASE("azimuth interval containment with wraparound") {
    CHECK(azimuth_interval_contains(0, 120, 0));
    CHECK(azimuth_interval_contains(0, 120, 119.999));
    CHECK_FALSE(azimuth_interval_contains(0, 120, 120));  // half-open
    CHECK_FALSE(azimuth_interval_contains(0, 120, 180));
    CHECK(azimuth_interval_contains(300, 120, 0));  // 0 in [300, 60)
    CHECK(azimuth_interval_contains(300, 120, 359));
    CHECK_FALSE(azimuth_interval_contains(300, 120, 60));
    CHECK(azimuth_interval_contains(0, 360, 271.5));
}
