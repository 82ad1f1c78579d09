#pragma once

#include "fraudts/arima.hpp"
#include "fraudts/baselines.hpp"
#include "fraudts/detector.hpp"
#include "fraudts/eval.hpp"
#include "fraudts/ingest.hpp"
#include "fraudts/stattests.hpp"

#include <optional>
#include <string>
#include <vector>

namespace fraudts {

struct PipelineConfig {
    std::string input_path;
    std::string output_dir = "out";
    double split_ratio = 0.7;
    double z_threshold = 3.0;
    bool two_sided = false;
    std::optional<ArimaOrder> order; ///< fixed order; auto selection when absent

    // baseline parameters
    std::size_t lof_k = 20; ///< clamped to n-1 per series
    double lof_threshold = 1.5;
    std::size_t iforest_trees = 100;
    std::size_t iforest_subsample = 256;
    int kmeans_restarts = 10;

    // identification
    double adf_significance = 0.05;
    bool adf_trend = false;
    std::size_t refit_every = 0; ///< refit coefficients every N observed test days (0 = never)

    InjectionSpec injection;
    std::uint64_t seed = 42;
    std::vector<std::string> methods = {"arima", "boxplot", "lof", "iforest", "kmeans"};
};

struct OrderAttempt {
    ArimaOrder order;
    double aic = 0.0;
    bool coefficients_significant = false;
    double ljung_box_pvalue = 0.0;
    bool accepted = false;
    std::string error; ///< non-empty when the fit itself failed
};

struct OrderSelection {
    ArimaModel model;
    std::vector<OrderAttempt> attempts;
    bool fallback_used = false; ///< no candidate passed both gates; lowest AIC kept
};

/// d = number of differencing passes (at most 2) until the ADF test rejects
/// the unit root at the configured significance level.
std::size_t choose_differencing(const std::vector<double>& train, const PipelineConfig& config);

/// Box-Jenkins style automatic order selection: candidates from the
/// correlogram plus (1,d,1) and (1,d,2); accept the lowest-AIC fit whose AR/MA
/// coefficients are all significant and whose residual Ljung-Box (h=10)
/// p-value exceeds 0.05, falling back to the lowest AIC overall.
OrderSelection select_order(const std::vector<double>& train, std::size_t d,
                            const PipelineConfig& config);

struct SeriesRunResult {
    std::string customer_id;
    AdfResult adf;
    Correlogram gram;
    OrderSelection selection;
    std::optional<LjungBoxResult> residual_ljung_box;
    std::vector<ForecastPoint> forecasts;
    std::vector<DetectionOutcome> outcomes;
};

/// Identification, estimation, rolling forecast and detection for one series.
SeriesRunResult run_series(const SplitSeries& split, const PipelineConfig& config);

/// Rolling forecast honouring config.refit_every; z-score statistics stay
/// anchored to the initial training residuals.
std::vector<ForecastPoint> forecast_with_refit(const ArimaModel& model, const SplitSeries& split,
                                               const PipelineConfig& config);

/// Detector factories for the configured methods, usable with run_experiment.
std::vector<DetectorFactory> make_detectors(const PipelineConfig& config);

struct PipelineResult {
    std::vector<std::string> eligible;
    std::vector<std::pair<std::string, std::string>> rejected; ///< (series, reason)
    ComparisonReport report;
};

/// End-to-end run: ingest, split, filter, per-series modelling and detection,
/// benchmarks, comparison report. All intermediates land under
/// config.output_dir. With `with_injection`, ineligible series are re-included
/// through seeded fraud injection.
PipelineResult run_pipeline(const PipelineConfig& config, bool with_injection);

// artifact writers shared by the pipeline and the CLI subcommands
void write_correlogram_csv(const std::string& path, const Correlogram& gram);
void write_detection_csv(const std::string& path, const SplitSeries& split,
                         const std::vector<ForecastPoint>& forecasts,
                         const std::vector<DetectionOutcome>& outcomes);
void write_baseline_csv(const std::string& path, const SplitSeries& split,
                        const BaselineFlagSet& flags);
std::string series_diagnostics_json(const SeriesRunResult& result);

} // namespace fraudts
