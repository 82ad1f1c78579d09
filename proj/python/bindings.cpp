#include "fraudts/arima.hpp"
#include "fraudts/baselines.hpp"
#include "fraudts/detector.hpp"
#include "fraudts/errors.hpp"
#include "fraudts/eval.hpp"
#include "fraudts/stattests.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>

namespace py = pybind11;
using namespace fraudts;

PYBIND11_MODULE(_fraudts, m) {
    m.doc() = "ARIMA-based anomaly detection on daily transaction counts";

    py::register_exception<Error>(m, "FraudtsError");

    py::class_<ArimaOrder>(m, "ArimaOrder")
        .def(py::init<std::size_t, std::size_t, std::size_t>(), py::arg("p"), py::arg("d"),
             py::arg("q"))
        .def_readwrite("p", &ArimaOrder::p)
        .def_readwrite("d", &ArimaOrder::d)
        .def_readwrite("q", &ArimaOrder::q)
        .def("__repr__", [](const ArimaOrder& o) {
            return "ArimaOrder(p=" + std::to_string(o.p) + ", d=" + std::to_string(o.d) +
                   ", q=" + std::to_string(o.q) + ")";
        });

    py::class_<ArimaModel>(m, "ArimaModel")
        .def(py::init<>())
        .def_readwrite("order", &ArimaModel::order)
        .def_readwrite("phi", &ArimaModel::phi)
        .def_readwrite("theta", &ArimaModel::theta)
        .def_readwrite("intercept", &ArimaModel::intercept)
        .def_readwrite("mu", &ArimaModel::mu)
        .def_readwrite("sigma2", &ArimaModel::sigma2)
        .def_readonly("loglik", &ArimaModel::loglik)
        .def_readonly("aic", &ArimaModel::aic)
        .def_readonly("train_residuals", &ArimaModel::train_residuals)
        .def_readonly("stderr", &ArimaModel::coef_stderr)
        .def("to_json", &model_to_json)
        .def_static("from_json", &model_from_json);

    py::class_<ForecastPoint>(m, "ForecastPoint")
        .def_readonly("day_index", &ForecastPoint::day_index)
        .def_readonly("predicted", &ForecastPoint::predicted)
        .def_readonly("actual", &ForecastPoint::actual)
        .def_readonly("error", &ForecastPoint::error);

    py::class_<DetectionOutcome>(m, "DetectionOutcome")
        .def_readonly("day_index", &DetectionOutcome::day_index)
        .def_readonly("z_score", &DetectionOutcome::z_score)
        .def_readonly("flagged", &DetectionOutcome::flagged)
        .def_readonly("actual_fraud_day", &DetectionOutcome::actual_fraud_day);

    py::class_<AdfResult>(m, "AdfResult")
        .def_readonly("t_statistic", &AdfResult::t_statistic)
        .def_readonly("p_value", &AdfResult::p_value)
        .def_readonly("lags_used", &AdfResult::lags_used)
        .def_readonly("stationary", &AdfResult::stationary);

    py::class_<LjungBoxResult>(m, "LjungBoxResult")
        .def_readonly("q_statistic", &LjungBoxResult::q_statistic)
        .def_readonly("p_value", &LjungBoxResult::p_value)
        .def_readonly("lags", &LjungBoxResult::lags)
        .def_readonly("dof", &LjungBoxResult::dof);

    py::class_<BaselineFlagSet>(m, "BaselineFlagSet")
        .def_readonly("method", &BaselineFlagSet::method)
        .def_readonly("flags", &BaselineFlagSet::flags)
        .def_readonly("scores", &BaselineFlagSet::scores);

    m.def(
        "fit",
        [](const std::vector<double>& series, std::size_t p, std::size_t d, std::size_t q) {
            return fit(series, ArimaOrder{p, d, q});
        },
        py::arg("series"), py::arg("p"), py::arg("d") = 0, py::arg("q") = 0);
    m.def("simulate", &simulate, py::arg("model"), py::arg("n"), py::arg("seed") = 0);
    m.def("rolling_forecast", &rolling_forecast, py::arg("model"), py::arg("train"),
          py::arg("test"));

    m.def(
        "adf_test",
        [](const std::vector<double>& series, std::optional<std::size_t> max_lag,
           double significance, bool trend, bool auto_lag) {
            return adf_test(series, max_lag, significance,
                            trend ? AdfRegression::ConstantTrend : AdfRegression::Constant,
                            auto_lag);
        },
        py::arg("series"), py::arg("max_lag") = std::nullopt, py::arg("significance") = 0.05,
        py::arg("trend") = false, py::arg("auto_lag") = true);
    m.def("acf", &acf, py::arg("series"), py::arg("max_lag"));
    m.def("pacf", &pacf, py::arg("series"), py::arg("max_lag"));
    m.def("ljung_box", &ljung_box, py::arg("residuals"), py::arg("lags"),
          py::arg("fitted_params"));
    m.def(
        "suggest_orders",
        [](const std::vector<double>& series, std::size_t max_lag) {
            return suggest_orders(correlogram(series, max_lag));
        },
        py::arg("series"), py::arg("max_lag"));

    m.def(
        "detect",
        [](const std::vector<ForecastPoint>& forecasts, const std::vector<double>& residuals,
           double threshold, bool two_sided) {
            DetectorConfig config;
            config.threshold = threshold;
            config.two_sided = two_sided;
            return detect(forecasts, residuals, config);
        },
        py::arg("forecasts"), py::arg("train_residuals"), py::arg("threshold") = 3.0,
        py::arg("two_sided") = false);

    m.def("boxplot_detect", &boxplot_detect, py::arg("series"), py::arg("test_start"),
          py::arg("whisker") = 1.5);
    m.def("lof_detect", &lof_detect, py::arg("series"), py::arg("test_start"), py::arg("k") = 20,
          py::arg("lof_threshold") = 1.5);
    m.def("iforest_detect", &iforest_detect, py::arg("train"), py::arg("test"),
          py::arg("trees") = 100, py::arg("subsample") = 256, py::arg("seed") = 0);
    m.def("kmeans_detect", &kmeans_detect, py::arg("series"), py::arg("test_start"),
          py::arg("seed") = 0, py::arg("restarts") = 10);

    m.def(
        "metrics",
        [](const std::vector<bool>& flags, const std::vector<bool>& truth) {
            const MetricValues v = metrics(confusion(flags, truth));
            py::dict out;
            out["precision"] = v.precision ? py::object(py::float_(*v.precision)) : py::none();
            out["recall"] = v.recall ? py::object(py::float_(*v.recall)) : py::none();
            out["f_measure"] = v.f_measure ? py::object(py::float_(*v.f_measure)) : py::none();
            return out;
        },
        py::arg("flags"), py::arg("truth"));
}
