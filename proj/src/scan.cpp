#include "crescendo/scan.hpp"

#include <fstream>
#include <sstream>

#include "crescendo/errors.hpp"

namespace crescendo {

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) out.push_back(field);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

}  // namespace

// scan_id,timestamp,true_lat,true_lon,cell_id_1,rss_1,...,cell_id_7,rss_7
std::vector<Scan> load_scans(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    std::vector<Scan> scans;
    std::string line;
    size_t lineno = 0;
    bool header = true;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        if (header) { header = false; continue; }
        auto f = split_line(line);
        if (f.size() < 6)
            throw ParseError(path + ":" + std::to_string(lineno) + ": too few fields");
        Scan s;
        s.id = f[0];
        s.timestamp = f[1];
        try {
            if (!f[2].empty() && !f[3].empty())
                s.ground_truth = GeoPoint{std::stod(f[2]), std::stod(f[3])};
            for (size_t k = 4; k + 1 < f.size() && k < 4 + 2 * kMaxVisibleCells; k += 2) {
                if (f[k].empty()) continue;
                s.entries.push_back({f[k], std::stod(f[k + 1])});
            }
        } catch (const std::exception&) {
            throw ParseError(path + ":" + std::to_string(lineno) + ": bad number");
        }
        if (s.entries.empty())
            throw ParseError(path + ":" + std::to_string(lineno) + ": scan has no cells");
        if (s.entries.size() > kMaxVisibleCells)
            throw ParseError(path + ":" + std::to_string(lineno) + ": more than 7 cells");
        for (size_t i = 0; i < s.entries.size(); ++i)
            for (size_t j = i + 1; j < s.entries.size(); ++j)
                if (s.entries[i].cell_id == s.entries[j].cell_id)
                    throw ParseError(path + ":" + std::to_string(lineno) + ": duplicate cell " +
                                     s.entries[i].cell_id);
        scans.push_back(std::move(s));
    }
    return scans;
}

void save_scans(const std::string& path, const std::vector<Scan>& scans) {
    std::ofstream out(path);
    if (!out) throw FormatError("cannot open " + path + " for writing");
    out << "scan_id,timestamp,true_lat,true_lon";
    for (size_t i = 1; i <= kMaxVisibleCells; ++i)
        out << ",cell_id_" << i << ",rss_" << i;
    out << '\n';
    out.precision(17);
    for (const auto& s : scans) {
        out << s.id << ',' << s.timestamp << ',';
        if (s.ground_truth) out << s.ground_truth->lat;
        out << ',';
        if (s.ground_truth) out << s.ground_truth->lon;
        for (size_t i = 0; i < kMaxVisibleCells; ++i) {
            if (i < s.entries.size())
                out << ',' << s.entries[i].cell_id << ',' << s.entries[i].rss;
            else
                out << ",,";
        }
        out << '\n';
    }
}

}  // namespace crescendo
