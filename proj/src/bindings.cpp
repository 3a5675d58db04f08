#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "crescendo/errors.hpp"
#include "crescendo/evaluate.hpp"
#include "crescendo/locate.hpp"
#include "crescendo/network.hpp"
#include "crescendo/precompute.hpp"
#include "crescendo/scan.hpp"
#include "crescendo/simulate.hpp"

namespace py = pybind11;
using namespace crescendo;

PYBIND11_MODULE(_crescendo, m) {
    m.doc() = "Calibration-free cellular localization from relative signal strengths";

    py::register_exception<ParseError>(m, "ParseError");
    py::register_exception<ValidationError>(m, "ValidationError");
    py::register_exception<FormatError>(m, "FormatError");
    py::register_exception<StaleTableError>(m, "StaleTableError");
    py::register_exception<NoUsableCellsError>(m, "NoUsableCellsError");

    py::class_<GeoPoint>(m, "GeoPoint")
        .def(py::init<double, double>(), py::arg("lat"), py::arg("lon"))
        .def_readwrite("lat", &GeoPoint::lat)
        .def_readwrite("lon", &GeoPoint::lon)
        .def("__repr__", [](const GeoPoint& p) {
            return "GeoPoint(lat=" + std::to_string(p.lat) + ", lon=" + std::to_string(p.lon) + ")";
        });

    py::class_<PlanarPoint>(m, "PlanarPoint")
        .def(py::init<double, double>(), py::arg("x"), py::arg("y"))
        .def_readwrite("x", &PlanarPoint::x)
        .def_readwrite("y", &PlanarPoint::y)
        .def("__repr__", [](const PlanarPoint& p) {
            return "PlanarPoint(x=" + std::to_string(p.x) + ", y=" + std::to_string(p.y) + ")";
        });

    m.def("project", &project, py::arg("point"), py::arg("origin"));
    m.def("unproject", &unproject, py::arg("point"), py::arg("origin"));

    py::class_<Site>(m, "Site")
        .def_readonly("id", &Site::id)
        .def_readonly("geo", &Site::geo)
        .def_readonly("pos", &Site::pos);

    py::class_<Sector>(m, "Sector")
        .def_readonly("id", &Sector::id)
        .def_readonly("site_index", &Sector::site_index)
        .def_readonly("azimuth_start", &Sector::azimuth_start)
        .def_readonly("azimuth_span", &Sector::azimuth_span);

    py::class_<Cell>(m, "Cell")
        .def_readonly("id", &Cell::id)
        .def_readonly("sector_index", &Cell::sector_index)
        .def_readonly("frequency_tag", &Cell::frequency_tag);

    py::class_<NetworkDB>(m, "NetworkDB")
        .def_static("load", &NetworkDB::load, py::arg("path"))
        .def("save_csv_dir", &NetworkDB::save_csv_dir)
        .def("save_json", &NetworkDB::save_json)
        .def_property_readonly("sites", &NetworkDB::sites)
        .def_property_readonly("sectors", &NetworkDB::sectors)
        .def_property_readonly("cells", &NetworkDB::cells)
        .def_property_readonly("projection_origin", &NetworkDB::projection_origin)
        .def_property_readonly("fingerprint", &NetworkDB::fingerprint)
        .def("nearest_site", &NetworkDB::nearest_site)
        .def("sector_contains", &NetworkDB::sector_contains)
        .def("cell_contains", &NetworkDB::cell_contains);

    py::class_<GridSpec>(m, "GridSpec")
        .def(py::init([](double min_x, double min_y, double max_x, double max_y, double step) {
                 GridSpec s{min_x, min_y, max_x, max_y, step};
                 s.validate();
                 return s;
             }),
             py::arg("min_x"), py::arg("min_y"), py::arg("max_x"), py::arg("max_y"),
             py::arg("step"))
        .def_readonly("min_x", &GridSpec::min_x)
        .def_readonly("min_y", &GridSpec::min_y)
        .def_readonly("max_x", &GridSpec::max_x)
        .def_readonly("max_y", &GridSpec::max_y)
        .def_readonly("step", &GridSpec::step)
        .def_property_readonly("nx", &GridSpec::nx)
        .def_property_readonly("ny", &GridSpec::ny)
        .def("point", &GridSpec::point);

    m.def("build_grid", &build_grid);

    py::class_<PrecomputeTable>(m, "PrecomputeTable")
        .def_static("build", &PrecomputeTable::build, py::arg("db"), py::arg("spec"),
                    py::arg("threads") = 0,
                    py::call_guard<py::gil_scoped_release>())
        .def_static("load", &PrecomputeTable::load)
        .def("save", &PrecomputeTable::save)
        .def_property_readonly("spec", &PrecomputeTable::spec)
        .def_property_readonly("n_records", &PrecomputeTable::n_records)
        .def_property_readonly("n_pairs", &PrecomputeTable::n_pairs)
        .def_property_readonly("network_fingerprint", &PrecomputeTable::network_fingerprint)
        .def("voronoi_site", &PrecomputeTable::voronoi_site)
        .def("cell_contained", &PrecomputeTable::cell_contained)
        .def("export_json", &PrecomputeTable::export_json)
        .def("__eq__", &PrecomputeTable::operator==);

    py::class_<ScanEntry>(m, "ScanEntry")
        .def(py::init<std::string, double>(), py::arg("cell_id"), py::arg("rss"))
        .def_readwrite("cell_id", &ScanEntry::cell_id)
        .def_readwrite("rss", &ScanEntry::rss);

    py::class_<Scan>(m, "Scan")
        .def(py::init<>())
        .def_readwrite("id", &Scan::id)
        .def_readwrite("timestamp", &Scan::timestamp)
        .def_readwrite("entries", &Scan::entries)
        .def_readwrite("ground_truth", &Scan::ground_truth);

    m.def("load_scans", &load_scans);
    m.def("save_scans", &save_scans);

    py::class_<LocationEstimate>(m, "LocationEstimate")
        .def_readonly("position", &LocationEstimate::position)
        .def_readonly("geo", &LocationEstimate::geo)
        .def_readonly("max_score", &LocationEstimate::max_score)
        .def_readonly("achievable_score", &LocationEstimate::achievable_score)
        .def_readonly("n_max_points", &LocationEstimate::n_max_points)
        .def_readonly("ambiguity_extent", &LocationEstimate::ambiguity_extent)
        .def_readonly("fallback_used", &LocationEstimate::fallback_used)
        .def_readonly("dropped_entries", &LocationEstimate::dropped_entries);

    m.def("localize",
          py::overload_cast<const Scan&, const PrecomputeTable&, const NetworkDB&>(&localize),
          py::arg("scan"), py::arg("table"), py::arg("db"));
    m.def("cell_id_baseline",
          py::overload_cast<const Scan&, const NetworkDB&>(&cell_id_baseline));
    m.def("centroid_baseline",
          py::overload_cast<const Scan&, const NetworkDB&>(&centroid_baseline));

    py::enum_<SimMode>(m, "SimMode")
        .value("IDEAL", SimMode::Ideal)
        .value("NOISY", SimMode::Noisy);
    py::enum_<Placement>(m, "Placement")
        .value("UNIFORM_RANDOM", Placement::UniformRandom)
        .value("HEX_LATTICE", Placement::HexLattice);

    py::class_<PropagationParams>(m, "PropagationParams")
        .def(py::init<>())
        .def_readwrite("tx_power", &PropagationParams::tx_power)
        .def_readwrite("path_loss_exponent", &PropagationParams::path_loss_exponent)
        .def_readwrite("shadowing_sigma", &PropagationParams::shadowing_sigma)
        .def_readwrite("out_of_sector_penalty", &PropagationParams::out_of_sector_penalty)
        .def_readwrite("detection_threshold", &PropagationParams::detection_threshold)
        .def_readwrite("max_visible", &PropagationParams::max_visible);

    py::class_<SimConfig>(m, "SimConfig")
        .def(py::init<>())
        .def_readwrite("min_x", &SimConfig::min_x)
        .def_readwrite("min_y", &SimConfig::min_y)
        .def_readwrite("max_x", &SimConfig::max_x)
        .def_readwrite("max_y", &SimConfig::max_y)
        .def_readwrite("n_sites", &SimConfig::n_sites)
        .def_readwrite("sectors_per_site", &SimConfig::sectors_per_site)
        .def_readwrite("cells_per_sector", &SimConfig::cells_per_sector)
        .def_readwrite("placement", &SimConfig::placement)
        .def_readwrite("rng_seed", &SimConfig::rng_seed)
        .def_readwrite("mode", &SimConfig::mode)
        .def_readwrite("propagation", &SimConfig::propagation)
        .def_readwrite("geo_anchor", &SimConfig::geo_anchor)
        .def_property_readonly("area_km2", &SimConfig::area_km2)
        .def_property_readonly("cell_density", &SimConfig::cell_density);

    py::class_<GroundTruthSample>(m, "GroundTruthSample")
        .def_readonly("true_position", &GroundTruthSample::true_position)
        .def_readonly("scan", &GroundTruthSample::scan);

    py::class_<Dataset>(m, "Dataset")
        .def_readonly("samples", &Dataset::samples)
        .def_readonly("no_coverage", &Dataset::no_coverage);

    m.def("generate_network", &generate_network, py::arg("config"));
    m.def("generate_dataset", &generate_dataset, py::arg("db"), py::arg("config"),
          py::arg("n_samples"), py::call_guard<py::gil_scoped_release>());
    m.def("thin_network", &thin_network, py::arg("db"), py::arg("target_cells"), py::arg("seed"));
    m.def("area_grid", &area_grid, py::arg("config"), py::arg("db"), py::arg("step"));

    py::class_<ErrorStats>(m, "ErrorStats")
        .def_readonly("n", &ErrorStats::n)
        .def_readonly("median_m", &ErrorStats::median_m)
        .def_readonly("mean_m", &ErrorStats::mean_m)
        .def_readonly("p75_m", &ErrorStats::p75_m)
        .def_readonly("p90_m", &ErrorStats::p90_m)
        .def_readonly("max_m", &ErrorStats::max_m)
        .def_readonly("cdf", &ErrorStats::cdf)
        .def_readonly("mean_runtime_us", &ErrorStats::mean_runtime_us);

    py::class_<MethodComparison>(m, "MethodComparison")
        .def_readonly("crescendo", &MethodComparison::crescendo)
        .def_readonly("cell_id", &MethodComparison::cell_id)
        .def_readonly("centroid", &MethodComparison::centroid)
        .def_readonly("n_input", &MethodComparison::n_input)
        .def_readonly("excluded", &MethodComparison::excluded);

    m.def("evaluate", &evaluate, py::arg("samples"), py::arg("table"), py::arg("db"),
          py::call_guard<py::gil_scoped_release>());
}
