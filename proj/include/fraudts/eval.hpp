#pragma once

#include "fraudts/ingest.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace fraudts {

struct ConfusionCounts {
    std::int64_t tp = 0;
    std::int64_t fp = 0;
    std::int64_t fn = 0;
    std::int64_t tn = 0;
};

/// Precision/Recall/F-Measure with explicit undefined markers; undefined
/// values are excluded from averages rather than zero-filled.
struct MetricValues {
    std::optional<double> precision;
    std::optional<double> recall;
    std::optional<double> f_measure;
};

struct MetricsReport {
    std::map<std::string, MetricValues> per_series;
    MetricValues aggregate; ///< arithmetic means of the defined per-series values
};

struct InjectionSpec {
    std::int64_t count_min = 1;
    std::int64_t count_max = 8;
    std::size_t repetitions = 100;
    std::uint64_t seed = 0;
};

/// A detector bound to one series: fitted/configured on the unmodified split,
/// then run against (possibly injected) variants of it.
using SeriesRunner = std::function<std::vector<bool>(const SplitSeries&, std::uint64_t seed)>;

struct DetectorFactory {
    std::string name;
    std::function<SeriesRunner(const SplitSeries& base)> bind;
};

struct ComparisonReport {
    std::vector<std::string> methods; ///< column order
    std::map<std::string, MetricsReport> per_method;
    std::vector<std::string> warnings;
};

ConfusionCounts confusion(const std::vector<bool>& flags, const std::vector<bool>& truth);

MetricValues metrics(const ConfusionCounts& c);

/// Mean of the defined entries; empty when none are defined.
std::optional<double> mean_defined(const std::vector<std::optional<double>>& values);

/// Add u ~ Uniform{count_min..count_max} transactions to one uniformly random
/// test day, all marked fraudulent. Train days are never touched.
SplitSeries inject_frauds(const SplitSeries& split, const InjectionSpec& spec);

/**
 * Comparison experiment over a set of series. Naturally eligible series are
 * evaluated once on their real labels; ineligible ones are re-included via
 * `spec.repetitions` seeded fraud injections whose defined metrics are
 * averaged per series first. Without an injection spec, ineligible series are
 * skipped with a warning. Per-series seeds derive from spec.seed; repetition
 * seeds are series_seed XOR repetition.
 */
ComparisonReport run_experiment(const std::vector<SplitSeries>& series_set,
                                const std::vector<DetectorFactory>& detectors,
                                const std::optional<InjectionSpec>& spec);

/// Report serialisation: JSON document and the metrics-by-method CSV grid
/// (percentages, 2 decimal places, "n/a" for undefined).
std::string report_to_json(const ComparisonReport& report);
std::string report_to_csv(const ComparisonReport& report);

} // namespace fraudts
