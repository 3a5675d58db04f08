#pragma once

#include <optional>
#include <string>
#include <vector>

#include "crescendo/geometry.hpp"

namespace crescendo {

inline constexpr size_t kMaxVisibleCells = 7;

struct ScanEntry {
    std::string cell_id;
    double rss = 0.0;  // dBm
};

// One device observation: up to 7 heard cells plus optional ground truth.
struct Scan {
    std::string id;
    std::string timestamp;
    std::vector<ScanEntry> entries;
    std::optional<GeoPoint> ground_truth;
};

std::vector<Scan> load_scans(const std::string& path);
void save_scans(const std::string& path, const std::vector<Scan>& scans);

}  // namespace crescendo
