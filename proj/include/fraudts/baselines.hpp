#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace fraudts {

struct BaselineFlagSet {
    std::string method; ///< boxplot | lof | iforest | kmeans
    std::vector<bool> flags;   ///< one per test day
    std::vector<double> scores; ///< method-specific anomaly score per test day
};

/// Linear-interpolation quantile of a sample (0 <= prob <= 1).
double quantile(std::vector<double> values, double prob);

/// Tukey fences computed on the entire series; flags restricted to
/// [test_start, end). Score is the signed exceedance beyond the nearer fence.
BaselineFlagSet boxplot_detect(const std::vector<double>& series, std::size_t test_start,
                               double whisker = 1.5);

/// Local outlier factor on the 1-D counts, fitted on the entire series,
/// flags read on the test range. lrd uses the +1e-10 guard so duplicate-heavy
/// integer data stays finite.
BaselineFlagSet lof_detect(const std::vector<double>& series, std::size_t test_start,
                           std::size_t k = 20, double lof_threshold = 1.5);

/// Isolation forest trained on the training counts only; test day flagged when
/// the anomaly score exceeds 0.5.
BaselineFlagSet iforest_detect(const std::vector<double>& train, const std::vector<double>& test,
                               std::size_t trees, std::size_t subsample, std::uint64_t seed);

/// Two-cluster 1-D k-means (k-means++ seeding, restarts) on the whole series;
/// the minority cluster is the positive class, ties go to the cluster with the
/// larger centroid.
BaselineFlagSet kmeans_detect(const std::vector<double>& series, std::size_t test_start,
                              std::uint64_t seed, int restarts = 10);

/// Within-cluster sum of squares of the best two-cluster assignment found.
double kmeans_best_inertia(const std::vector<double>& series, std::uint64_t seed,
                           int restarts = 10);

} // namespace fraudts
