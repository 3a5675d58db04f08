#pragma once

#include <cmath>

namespace crescendo {

inline constexpr double kEarthRadiusM = 6371000.0;
inline constexpr double kDegToRad = 3.14159265358979323846 / 180.0;

// WGS84 geographic coordinate, degrees.
struct GeoPoint {
    double lat = 0.0;
    double lon = 0.0;
};

// Local planar coordinate, meters east/north of the projection origin.
struct PlanarPoint {
    double x = 0.0;
    double y = 0.0;
};

// Local equirectangular projection about `origin`. Adequate for areas of a
// few km across; distances stay within micrometers of great-circle values
// at that scale.
inline PlanarPoint project(const GeoPoint& p, const GeoPoint& origin) {
    return {(p.lon - origin.lon) * std::cos(origin.lat * kDegToRad) * kEarthRadiusM * kDegToRad,
            (p.lat - origin.lat) * kEarthRadiusM * kDegToRad};
}

inline GeoPoint unproject(const PlanarPoint& p, const GeoPoint& origin) {
    return {origin.lat + p.y / (kEarthRadiusM * kDegToRad),
            origin.lon + p.x / (std::cos(origin.lat * kDegToRad) * kEarthRadiusM * kDegToRad)};
}

inline double dist2(const PlanarPoint& a, const PlanarPoint& b) {
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    return dx * dx + dy * dy;
}

inline double dist(const PlanarPoint& a, const PlanarPoint& b) {
    return std::sqrt(dist2(a, b));
}

// Bearing of `to` as seen from `from`, degrees clockwise from north in [0, 360).
// Undefined (returns 0) when the points coincide; callers treat that case
// separately.
inline double bearing_deg(const PlanarPoint& from, const PlanarPoint& to) {
    const double dx = to.x - from.x;
    const double dy = to.y - from.y;
    if (dx == 0.0 && dy == 0.0) return 0.0;
    double deg = std::atan2(dx, dy) / kDegToRad;  // atan2(east, north) => clockwise from north
    if (deg < 0.0) deg += 360.0;
    if (deg >= 360.0) deg -= 360.0;
    return deg;
}

enum class BisectorSide { CloserToA, CloserToB, OnBisector };

// Tolerance on squared-distance differences for the three-state predicate.
inline constexpr double kBisectorEps = 1e-9;

// Which side of the perpendicular bisector of (a, b) the point p lies on.
inline BisectorSide bisector_side(const PlanarPoint& p, const PlanarPoint& a,
                                  const PlanarPoint& b) {
    const double diff = dist2(p, b) - dist2(p, a);
    if (std::fabs(diff) < kBisectorEps) return BisectorSide::OnBisector;
    return diff > 0.0 ? BisectorSide::CloserToA : BisectorSide::CloserToB;
}

// True iff bearing lies in the half-open azimuth interval
// [start, start+span) with wraparound at 360. A full span contains everything.
inline bool azimuth_interval_contains(double start, double span, double bearing) {
    if (span >= 360.0) return true;
    double rel = bearing - start;
    rel = std::fmod(rel, 360.0);
    if (rel < 0.0) rel += 360.0;
    return rel < span;
}

}  // namespace crescendo
