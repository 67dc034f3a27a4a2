#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "rgforecast/evaluation.hpp"
#include "rgforecast/extrapolator.hpp"
#include "rgforecast/interpolator.hpp"
#include "rgforecast/scenario.hpp"
#include "rgforecast/series.hpp"

namespace py = pybind11;
using namespace rgforecast;

namespace {

Dimension parse_dimension(const std::string& name) {
    if (name == "k") {
        return Dimension::k;
    }
    if (name == "sequence") {
        return Dimension::sequence;
    }
    if (name == "horizon") {
        return Dimension::horizon;
    }
    throw py::value_error("dimension must be 'k', 'sequence' or 'horizon'");
}

GridLevel make_level(const std::string& dimension, const py::object& value) {
    const auto dim = parse_dimension(dimension);
    switch (dim) {
        case Dimension::k:
            return {dim, value.cast<int>()};
        case Dimension::sequence:
            return {dim, value.cast<std::string>()};
        case Dimension::horizon:
            return {dim, value.cast<double>()};
    }
    throw py::value_error("bad dimension");
}

py::object level_value(const GridLevel& level) {
    return std::visit([](const auto& v) { return py::cast(v); }, level.value);
}

GridSpec make_grid(std::vector<int> k_values, const std::vector<std::string>& sequences, std::vector<double> horizons) {
    GridSpec grid;
    grid.k_values = std::move(k_values);
    grid.sequences.clear();
    for (const auto& s : sequences) {
        grid.sequences.push_back(parse_sequence(s));
    }
    grid.horizons = std::move(horizons);
    grid.validate();
    return grid;
}

}  // namespace

PYBIND11_MODULE(_rgforecast, m) {
    m.doc() = "Self-similar renormalization-group forecasting";
    m.attr("__version__") = "0.1.0";

    py::register_exception<DataError>(m, "DataError", PyExc_ValueError);
    py::register_exception<ZeroCoefficientError>(m, "ZeroCoefficientError", PyExc_ArithmeticError);

    py::class_<TimeSeries>(m, "TimeSeries")
        .def(py::init([](const std::vector<double>& values) { return TimeSeries::from_values(values); }), py::arg("values"))
        .def("__len__", &TimeSeries::size)
        .def("__getitem__", &TimeSeries::value)
        .def("label", &TimeSeries::label)
        .def("find_label", &TimeSeries::find_label)
        .def("values", &TimeSeries::values)
        .def("labels", [](const TimeSeries& s) {
            std::vector<std::string> out;
            for (const auto& o : s.observations()) {
                out.push_back(o.label);
            }
            return out;
        })
        .def("scaled", &TimeSeries::scaled);

    m.def(
        "load_series",
        [](const std::filesystem::path& path, const std::string& date_col, const std::string& value_col, char delimiter) {
            ColumnSpec columns;
            columns.date = parse_column_ref(date_col);
            const auto value = parse_column_ref(value_col);
            if (!value) {
                throw py::value_error("value column cannot be 'none'");
            }
            columns.value = *value;
            columns.delimiter = delimiter;
            return load_series(path, columns);
        },
        py::arg("path"), py::arg("date_col") = "0", py::arg("value_col") = "1", py::arg("delimiter") = ',');

    py::class_<SequenceSpec>(m, "SequenceSpec")
        .def(py::init<std::string, std::vector<int>>(), py::arg("name"), py::arg("offsets"))
        .def_readonly("name", &SequenceSpec::name)
        .def_readonly("offsets", &SequenceSpec::offsets)
        .def("__repr__", [](const SequenceSpec& s) { return "SequenceSpec('" + s.name + "')"; });

    m.def("builtin_sequence", [](const std::string& name) { return builtin_sequence(name); }, py::arg("name"));

    py::class_<PastHistory>(m, "PastHistory")
        .def(py::init([](const std::vector<std::pair<double, double>>& points, std::size_t anchor) {
                 std::vector<HistoryPoint> pts;
                 for (const auto& [t, f] : points) {
                     pts.push_back({t, f});
                 }
                 return PastHistory(std::move(pts), anchor);
             }),
             py::arg("points"), py::arg("anchor_index") = 0)
        .def_property_readonly("points",
                               [](const PastHistory& h) {
                                   std::vector<std::pair<double, double>> out;
                                   for (const auto& p : h.points()) {
                                       out.emplace_back(p.t, p.f);
                                   }
                                   return out;
                               })
        .def_property_readonly("anchor_index", &PastHistory::anchor_index);

    m.def("past_history", &past_history, py::arg("series"), py::arg("anchor"), py::arg("sequence"), py::arg("k"));

    py::class_<PolynomialFit>(m, "PolynomialFit")
        .def_readonly("coefficients", &PolynomialFit::coefficients)
        .def_readonly("history", &PolynomialFit::history);
    m.def("fit", &fit, py::arg("history"));
    m.def("evaluate", py::overload_cast<const PolynomialFit&, double>(&evaluate), py::arg("fit"), py::arg("t"));

    m.def("effective_time", &effective_time, py::arg("n"), py::arg("velocity"));
    m.def(
        "cost_functional",
        [](const std::vector<double>& taus, const std::vector<double>& velocities) { return cost_functional(taus, velocities); },
        py::arg("taus"), py::arg("velocities"));

    py::class_<Forecast>(m, "Forecast")
        .def_readonly("value", &Forecast::value)
        .def_readonly("horizon", &Forecast::horizon)
        .def_property_readonly("ok", &Forecast::ok)
        .def_property_readonly("velocities", [](const Forecast& f) { return f.diagnostics.velocities; })
        .def_property_readonly("effective_times", [](const Forecast& f) { return f.diagnostics.effective_times; })
        .def_property_readonly("controllers", [](const Forecast& f) { return f.diagnostics.controllers; });
    m.def("forecast", &forecast, py::arg("fit"), py::arg("horizon"));

    py::class_<GridSpec>(m, "GridSpec")
        .def(py::init(&make_grid), py::arg("k_values") = std::vector<int>{3, 4, 5, 6},
             py::arg("sequences") = std::vector<std::string>{"A", "B", "C"},
             py::arg("horizons") = std::vector<double>{0.1, 0.3, 0.5, 0.7, 1.0})
        .def_readonly("k_values", &GridSpec::k_values)
        .def_readonly("sequences", &GridSpec::sequences)
        .def_readonly("horizons", &GridSpec::horizons)
        .def("__len__", &GridSpec::size);

    py::class_<ForecastScenario>(m, "ForecastScenario")
        .def_readonly("k", &ForecastScenario::k)
        .def_readonly("sequence", &ForecastScenario::sequence)
        .def_readonly("horizon", &ForecastScenario::horizon)
        .def_readonly("anchor_index", &ForecastScenario::anchor_index)
        .def_property_readonly("status", [](const ForecastScenario& s) { return to_string(s.status); })
        .def_property_readonly("valid", &ForecastScenario::valid)
        .def_property_readonly("value", &ForecastScenario::value);

    m.def("run_grid", &run_grid, py::arg("series"), py::arg("anchor"), py::arg("grid") = GridSpec{});
    m.def(
        "fixed_dimension_average",
        [](const std::vector<ForecastScenario>& scenarios, const std::string& dimension, const py::object& level) {
            const auto avg = fixed_dimension_average(scenarios, make_level(dimension, level));
            return py::make_tuple(avg.mean, avg.cells);
        },
        py::arg("scenarios"), py::arg("dimension"), py::arg("level"));

    py::class_<WeightEntry>(m, "WeightEntry")
        .def_property_readonly("k", [](const WeightEntry& e) { return e.cell.k; })
        .def_property_readonly("sequence", [](const WeightEntry& e) { return e.cell.sequence; })
        .def_readonly("forecast", &WeightEntry::forecast)
        .def_readonly("increment", &WeightEntry::increment)
        .def_readonly("entropy", &WeightEntry::entropy)
        .def_readonly("delta_entropy", &WeightEntry::delta_entropy)
        .def_readonly("multiplier", &WeightEntry::multiplier)
        .def_readonly("probability", &WeightEntry::probability)
        .def_readonly("degenerate", &WeightEntry::degenerate);

    py::class_<ScenarioWeights>(m, "ScenarioWeights")
        .def_readonly("horizon", &ScenarioWeights::horizon)
        .def_readonly("entries", &ScenarioWeights::entries)
        .def_readonly("excluded", &ScenarioWeights::excluded)
        .def_property_readonly("average_multipliers", [](const ScenarioWeights& w) {
            py::dict out;
            for (const auto& lm : w.average_multipliers) {
                out[py::int_(lm.k)] = lm.mean_multiplier ? py::object(py::float_(*lm.mean_multiplier)) : py::none();
            }
            return out;
        });

    m.def("level_probabilities", [](const std::vector<double>& m) { return level_probabilities(m); }, py::arg("multipliers"));
    m.def("scenario_weights", &scenario_weights, py::arg("series"), py::arg("anchor"), py::arg("grid"), py::arg("horizon"));
    m.def(
        "weighted_forecast",
        [](const std::vector<ForecastScenario>& scenarios, const ScenarioWeights& w) { return weighted_forecast(scenarios, w); },
        py::arg("scenarios"), py::arg("weights"));
    m.def(
        "most_probable_scenario",
        [](const ScenarioWeights& w) {
            const auto key = most_probable_scenario(w);
            return py::make_tuple(key.k, key.sequence);
        },
        py::arg("weights"));

    m.def(
        "mape",
        [](const std::vector<double>& predictions, const std::vector<double>& actuals) { return mape(predictions, actuals); },
        py::arg("predictions"), py::arg("actuals"));

    py::class_<BacktestReport>(m, "BacktestReport")
        .def_property_readonly("n_days", [](const BacktestReport& r) { return r.days.size(); })
        .def_property_readonly("excluded_cells", &BacktestReport::excluded_cells)
        .def("predictions", [](const BacktestReport& r) {
            std::vector<double> out;
            for (const auto& d : r.days) {
                out.push_back(d.predicted);
            }
            return out;
        });

    m.def("backtest", &backtest, py::arg("series"), py::arg("grid"), py::arg("first"), py::arg("last"), py::arg("threads") = 0,
          py::call_guard<py::gil_scoped_release>());

    auto stats_dict = [](const IndicatorStats& s) {
        py::dict d;
        d["n_days"] = s.n_days;
        d["mape"] = s.mape;
        d["okape"] = s.okape;
        d["trend_ok"] = s.trend.percent;
        d["flat_days"] = s.trend.flat_days;
        return d;
    };
    m.def(
        "indicator_tables",
        [stats_dict](const BacktestReport& r) {
            py::list rows;
            for (const auto& row : indicator_tables(r)) {
                auto d = stats_dict(row.stats);
                d["dimension"] = to_string(row.level.dimension);
                d["level"] = level_value(row.level);
                rows.append(d);
            }
            return rows;
        },
        py::arg("report"));
    m.def(
        "combination_table",
        [stats_dict](const BacktestReport& r) {
            py::list rows;
            for (const auto& row : combination_table(r)) {
                auto d = stats_dict(row.stats);
                d["k"] = row.k;
                d["sequence"] = row.sequence;
                d["horizon"] = row.horizon;
                rows.append(d);
            }
            return rows;
        },
        py::arg("report"));
    m.def(
        "win_rate_table",
        [](const BacktestReport& r) {
            py::list rows;
            for (const auto& row : win_rate_table(r).rows) {
                py::dict d;
                d["dimension"] = to_string(row.level.dimension);
                d["level"] = level_value(row.level);
                d["wins"] = row.wins;
                d["percent"] = row.percent;
                rows.append(d);
            }
            return rows;
        },
        py::arg("report"));
}
