// Python bindings for the core operations: dataset generation and ingest,
// forecast metrics, the regression forest, and the PV chain.

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "solarcast/datagen.hpp"
#include "solarcast/forest.hpp"
#include "solarcast/ingest.hpp"
#include "solarcast/metrics.hpp"
#include "solarcast/pipeline.hpp"
#include "solarcast/preprocess.hpp"
#include "solarcast/pv.hpp"
#include "solarcast/solar_position.hpp"

namespace py = pybind11;
using namespace solarcast;

namespace {

std::vector<double> to_vector(const py::array_t<double, py::array::c_style |
                                                            py::array::forcecast>& a) {
    return std::vector<double>(a.data(), a.data() + a.size());
}

rf::FeatureMatrix to_matrix(const py::array_t<double, py::array::c_style |
                                                          py::array::forcecast>& a,
                            std::vector<std::string> names) {
    if (a.ndim() != 2) throw UsageError("expected a 2-D feature array");
    const size_t rows = static_cast<size_t>(a.shape(0));
    const size_t cols = static_cast<size_t>(a.shape(1));
    rf::FeatureMatrix x;
    if (names.empty()) {
        for (size_t f = 0; f < cols; ++f) names.push_back("f" + std::to_string(f));
    }
    if (names.size() != cols) throw UsageError("feature name count mismatch");
    x.names = std::move(names);
    x.columns.assign(cols, std::vector<double>(rows));
    auto r = a.unchecked<2>();
    for (size_t i = 0; i < rows; ++i) {
        for (size_t f = 0; f < cols; ++f) {
            x.columns[f][i] = r(static_cast<py::ssize_t>(i), static_cast<py::ssize_t>(f));
        }
    }
    return x;
}

py::dict timeseries_columns(const TimeSeries& ts) {
    py::dict out;
    const size_t n = ts.size();
    for (Variable v : kAllVariables) {
        py::array_t<double> col(static_cast<py::ssize_t>(n));
        auto w = col.mutable_unchecked<1>();
        for (size_t i = 0; i < n; ++i) {
            auto value = variable_value(ts.records[i], v);
            w(static_cast<py::ssize_t>(i)) =
                value ? *value : std::numeric_limits<double>::quiet_NaN();
        }
        out[variable_name(v)] = col;
    }
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "solarcast core: irradiance forecasting and PV simulation";
    m.attr("__version__") = SOLARCAST_VERSION;

    py::register_exception<Error>(m, "SolarcastError");

    // Metrics.
    m.def("rmse", [](py::array_t<double> y, py::array_t<double> yhat) {
        return metrics::rmse(to_vector(y), to_vector(yhat));
    });
    m.def("mae", [](py::array_t<double> y, py::array_t<double> yhat) {
        return metrics::mae(to_vector(y), to_vector(yhat));
    });
    m.def("nrmse", [](py::array_t<double> y, py::array_t<double> yhat) {
        return metrics::nrmse(to_vector(y), to_vector(yhat));
    });
    m.def("mase", [](py::array_t<double> y, py::array_t<double> yhat) {
        return metrics::mase(to_vector(y), to_vector(yhat));
    });
    m.def("classify_nrmse", [](double v) {
        return std::string(metrics::rating_name(metrics::classify_nrmse(v)));
    });

    // Dataset generation + ingest.
    m.def(
        "generate_dataset",
        [](int start_year, int end_year, uint64_t seed, const std::string& out_path) {
            datagen::GenerationOptions opts;
            opts.start_year = start_year;
            opts.end_year = end_year;
            opts.seed = seed;
            const TimeSeries ts = datagen::generate(opts);
            if (!out_path.empty()) datagen::write_nsrdb_csv(ts, out_path);
            return timeseries_columns(ts);
        },
        py::arg("start_year") = 2005, py::arg("end_year") = 2022,
        py::arg("seed") = datagen::GenerationOptions{}.seed, py::arg("out_path") = "");
    m.def(
        "parse_csv",
        [](const std::string& path, const std::string& mode) {
            HeaderMode hm = HeaderMode::auto_detect;
            if (mode == "plain") hm = HeaderMode::plain;
            if (mode == "nsrdb") hm = HeaderMode::nsrdb;
            return timeseries_columns(parse_csv(path, hm));
        },
        py::arg("path"), py::arg("header_mode") = "auto");
    m.def("summary_stats_csv", [](const std::string& path) {
        return to_csv(summary_stats(parse_csv(path)));
    });

    // Regression forest.
    py::class_<rf::ForestModel>(m, "Forest")
        .def("predict",
             [](const rf::ForestModel& model, py::array_t<double> x) {
                 const rf::FeatureMatrix mx = to_matrix(x, model.feature_names);
                 const std::vector<double> pred = model.predict(mx);
                 return py::array_t<double>(static_cast<py::ssize_t>(pred.size()),
                                            pred.data());
             })
        .def_property_readonly("importances",
                               [](const rf::ForestModel& model) {
                                   return py::array_t<double>(
                                       static_cast<py::ssize_t>(model.importances.size()),
                                       model.importances.data());
                               })
        .def_property_readonly("feature_names",
                               [](const rf::ForestModel& m2) { return m2.feature_names; })
        .def("save", [](const rf::ForestModel& model, const std::string& path) {
            rf::save_forest(model, path);
        });
    m.def(
        "fit_forest",
        [](py::array_t<double> x, py::array_t<double> y, int n_trees, int max_depth,
           int min_samples_leaf, bool bootstrap, uint64_t seed,
           std::vector<std::string> names) {
            rf::ForestHyperParams params;
            params.n_trees = n_trees;
            params.max_depth = max_depth;
            params.min_samples_leaf = min_samples_leaf;
            params.bootstrap = bootstrap;
            params.seed = seed;
            return rf::fit(to_matrix(x, std::move(names)), to_vector(y), params);
        },
        py::arg("x"), py::arg("y"), py::arg("n_trees") = 100, py::arg("max_depth") = 0,
        py::arg("min_samples_leaf") = 1, py::arg("bootstrap") = true, py::arg("seed") = 0,
        py::arg("feature_names") = std::vector<std::string>{});
    m.def("load_forest", &rf::load_forest);

    // Solar geometry and the PV chain.
    py::class_<pv::SolarGeometry>(m, "SolarGeometry")
        .def_readonly("zenith", &pv::SolarGeometry::zenith)
        .def_readonly("apparent_azimuth", &pv::SolarGeometry::apparent_azimuth)
        .def_readonly("aoi", &pv::SolarGeometry::aoi)
        .def_readonly("extraterrestrial_dni", &pv::SolarGeometry::extraterrestrial_dni);
    m.def(
        "solar_position",
        [](int year, int month, int day, int hour, int minute, double lat, double lon,
           double altitude, int tz) {
            pv::Location loc{lat, lon, altitude, tz};
            return pv::solar_position({year, month, day, hour, minute}, loc);
        },
        py::arg("year"), py::arg("month"), py::arg("day"), py::arg("hour"),
        py::arg("minute"), py::arg("latitude"), py::arg("longitude"),
        py::arg("altitude") = 0.0, py::arg("timezone_offset") = 0);
    m.def(
        "faiman_cell_temp",
        [](double g_poa, double t_ambient, double wind_speed, double u0, double u1) {
            return pv::faiman_cell_temp(g_poa, t_ambient, wind_speed, {u0, u1});
        },
        py::arg("g_poa"), py::arg("t_ambient"), py::arg("wind_speed"), py::arg("u0") = 25.0,
        py::arg("u1") = 6.84);
    py::class_<pv::MaxPowerPoint>(m, "MaxPowerPoint")
        .def_readonly("v_mp", &pv::MaxPowerPoint::v_mp)
        .def_readonly("i_mp", &pv::MaxPowerPoint::i_mp)
        .def_readonly("p_mp", &pv::MaxPowerPoint::p_mp)
        .def_readonly("v_oc", &pv::MaxPowerPoint::v_oc)
        .def_readonly("i_sc", &pv::MaxPowerPoint::i_sc);
    m.def(
        "module_max_power",
        [](const std::string& spec_path, double effective_irradiance, double cell_temp) {
            const pv::PvSystemSpec spec = pv::load_system_spec(spec_path);
            return pv::single_diode_max_power(spec.module, effective_irradiance, cell_temp);
        },
        py::arg("system_spec_path"), py::arg("effective_irradiance"), py::arg("cell_temp"));
    m.def(
        "inverter_ac_power",
        [](const std::string& spec_path, double p_dc, double v_dc) {
            const pv::PvSystemSpec spec = pv::load_system_spec(spec_path);
            return pv::inverter_ac_power(p_dc, v_dc, spec.inverter);
        },
        py::arg("system_spec_path"), py::arg("p_dc"), py::arg("v_dc"));
}
