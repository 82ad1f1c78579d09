#include "fraudts/baselines.hpp"

#include "fraudts/errors.hpp"
#include "fraudts/rng.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <numeric>

namespace fraudts {

double quantile(std::vector<double> values, double prob) {
    if (values.empty()) throw NoDataError("quantile of an empty sample");
    if (prob < 0.0 || prob > 1.0) throw ConfigError("quantile probability outside [0,1]");
    std::sort(values.begin(), values.end());
    const double pos = prob * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(pos);
    if (lo + 1 >= values.size()) return values.back();
    const double frac = pos - static_cast<double>(lo);
    return values[lo] + frac * (values[lo + 1] - values[lo]);
}

BaselineFlagSet boxplot_detect(const std::vector<double>& series, std::size_t test_start,
                               double whisker) {
    if (series.size() < 4) throw InsufficientDataError("boxplot needs at least 4 observations");
    if (test_start > series.size()) throw ShapeError("test range starts past the series end");

    const double q1 = quantile(series, 0.25);
    const double q3 = quantile(series, 0.75);
    const double iqr = q3 - q1;
    const double lower = q1 - whisker * iqr;
    const double upper = q3 + whisker * iqr;

    BaselineFlagSet out;
    out.method = "boxplot";
    for (std::size_t i = test_start; i < series.size(); ++i) {
        const double v = series[i];
        out.flags.push_back(v > upper || v < lower);
        out.scores.push_back(std::max(v - upper, lower - v));
    }
    return out;
}

BaselineFlagSet lof_detect(const std::vector<double>& series, std::size_t test_start,
                           std::size_t k, double lof_threshold) {
    const std::size_t n = series.size();
    if (k == 0 || k >= n) throw ConfigError("lof needs 1 <= k < n");
    if (test_start > n) throw ShapeError("test range starts past the series end");

    // k-distance and neighbourhoods (ties included)
    std::vector<double> kdist(n);
    std::vector<std::vector<std::size_t>> neighbours(n);
    std::vector<double> dists;
    for (std::size_t i = 0; i < n; ++i) {
        dists.clear();
        for (std::size_t j = 0; j < n; ++j) {
            if (j != i) dists.push_back(std::abs(series[i] - series[j]));
        }
        std::nth_element(dists.begin(), dists.begin() + static_cast<std::ptrdiff_t>(k - 1),
                         dists.end());
        kdist[i] = dists[k - 1];
        for (std::size_t j = 0; j < n; ++j) {
            if (j != i && std::abs(series[i] - series[j]) <= kdist[i]) {
                neighbours[i].push_back(j);
            }
        }
    }

    std::vector<double> lrd(n);
    for (std::size_t i = 0; i < n; ++i) {
        double reach_sum = 0.0;
        for (const std::size_t j : neighbours[i]) {
            reach_sum += std::max(kdist[j], std::abs(series[i] - series[j]));
        }
        lrd[i] = 1.0 / (reach_sum / static_cast<double>(neighbours[i].size()) + 1e-10);
    }

    BaselineFlagSet out;
    out.method = "lof";
    for (std::size_t i = test_start; i < n; ++i) {
        double lrd_sum = 0.0;
        for (const std::size_t j : neighbours[i]) lrd_sum += lrd[j];
        const double lof = lrd_sum / static_cast<double>(neighbours[i].size()) / lrd[i];
        out.scores.push_back(lof);
        out.flags.push_back(lof > lof_threshold);
    }
    return out;
}

namespace {

/// Average unsuccessful-search path length of a BST with m nodes.
double average_path_length(std::size_t m) {
    if (m <= 1) return 0.0;
    if (m == 2) return 1.0;
    const double mm = static_cast<double>(m);
    const double harmonic = std::log(mm - 1.0) + 0.5772156649015329;
    return 2.0 * harmonic - 2.0 * (mm - 1.0) / mm;
}

struct IsolationNode {
    double split = 0.0;
    std::int32_t left = -1;
    std::int32_t right = -1;
    std::size_t size = 0; ///< external nodes only
};

class IsolationTree {
public:
    IsolationTree(std::vector<double> sample, std::size_t height_limit, Rng& rng) {
        build(std::move(sample), 0, height_limit, rng);
    }

    double path_length(double x) const {
        std::size_t node = 0;
        double depth = 0.0;
        while (nodes_[node].left >= 0) {
            node = x < nodes_[node].split ? static_cast<std::size_t>(nodes_[node].left)
                                          : static_cast<std::size_t>(nodes_[node].right);
            depth += 1.0;
        }
        return depth + average_path_length(nodes_[node].size);
    }

private:
    std::int32_t build(std::vector<double> data, std::size_t height, std::size_t limit,
                       Rng& rng) {
        const auto id = static_cast<std::int32_t>(nodes_.size());
        nodes_.push_back({});
        if (data.size() <= 1 || height >= limit) {
            nodes_[static_cast<std::size_t>(id)].size = data.size();
            return id;
        }
        const auto [lo, hi] = std::minmax_element(data.begin(), data.end());
        if (*lo == *hi) {
            nodes_[static_cast<std::size_t>(id)].size = data.size();
            return id;
        }
        const double split = rng.uniform(*lo, *hi);
        std::vector<double> left, right;
        for (const double v : data) (v < split ? left : right).push_back(v);
        data.clear();
        data.shrink_to_fit();
        const std::int32_t l = build(std::move(left), height + 1, limit, rng);
        const std::int32_t r = build(std::move(right), height + 1, limit, rng);
        nodes_[static_cast<std::size_t>(id)].split = split;
        nodes_[static_cast<std::size_t>(id)].left = l;
        nodes_[static_cast<std::size_t>(id)].right = r;
        return id;
    }

    std::vector<IsolationNode> nodes_;
};

} // namespace

BaselineFlagSet iforest_detect(const std::vector<double>& train, const std::vector<double>& test,
                               std::size_t trees, std::size_t subsample, std::uint64_t seed) {
    if (train.empty()) throw NoDataError("isolation forest needs training data");
    if (trees == 0) throw ConfigError("isolation forest needs at least one tree");
    std::size_t psi = subsample;
    if (psi > train.size()) {
        std::cerr << "iforest: subsample " << psi << " clamped to training size " << train.size()
                  << "\n";
        psi = train.size();
    }
    if (psi == 0) throw ConfigError("isolation forest subsample must be positive");
    const auto height_limit = static_cast<std::size_t>(
        std::ceil(std::log2(std::max<double>(2.0, static_cast<double>(psi)))));

    Rng rng(seed);
    std::vector<IsolationTree> forest;
    forest.reserve(trees);
    std::vector<std::size_t> index(train.size());
    std::iota(index.begin(), index.end(), 0);
    for (std::size_t t = 0; t < trees; ++t) {
        // subsample without replacement (partial Fisher-Yates)
        for (std::size_t i = 0; i < psi; ++i) {
            const auto j = static_cast<std::size_t>(
                rng.uniform_int(static_cast<std::int64_t>(i),
                                static_cast<std::int64_t>(index.size() - 1)));
            std::swap(index[i], index[j]);
        }
        std::vector<double> sample(psi);
        for (std::size_t i = 0; i < psi; ++i) sample[i] = train[index[i]];
        forest.emplace_back(std::move(sample), height_limit, rng);
    }

    double denom = average_path_length(psi);
    if (denom <= 0.0) denom = 1.0;

    BaselineFlagSet out;
    out.method = "iforest";
    out.flags.reserve(test.size());
    out.scores.reserve(test.size());
    for (const double x : test) {
        double total = 0.0;
        for (const auto& tree : forest) total += tree.path_length(x);
        const double mean_path = total / static_cast<double>(trees);
        const double score = std::pow(2.0, -mean_path / denom);
        out.scores.push_back(score);
        out.flags.push_back(score > 0.5);
    }
    return out;
}

namespace {

struct KmeansRun {
    double centroids[2] = {0.0, 0.0};
    std::vector<int> assignment;
    double inertia = std::numeric_limits<double>::infinity();
};

KmeansRun kmeans_once(const std::vector<double>& values, Rng& rng) {
    const std::size_t n = values.size();
    KmeansRun run;
    run.assignment.assign(n, 0);

    // k-means++ seeding
    const double first = values[static_cast<std::size_t>(
        rng.uniform_int(0, static_cast<std::int64_t>(n - 1)))];
    double total = 0.0;
    std::vector<double> weight(n);
    for (std::size_t i = 0; i < n; ++i) {
        weight[i] = (values[i] - first) * (values[i] - first);
        total += weight[i];
    }
    double second = first;
    if (total > 0.0) {
        double draw = rng.uniform01() * total;
        for (std::size_t i = 0; i < n; ++i) {
            draw -= weight[i];
            if (draw <= 0.0 && weight[i] > 0.0) {
                second = values[i];
                break;
            }
        }
    }
    run.centroids[0] = first;
    run.centroids[1] = second;

    for (int iter = 0; iter < 200; ++iter) {
        bool changed = iter == 0;
        for (std::size_t i = 0; i < n; ++i) {
            const double d0 = std::abs(values[i] - run.centroids[0]);
            const double d1 = std::abs(values[i] - run.centroids[1]);
            const int a = d1 < d0 ? 1 : 0;
            if (a != run.assignment[i]) changed = true;
            run.assignment[i] = a;
        }
        if (!changed) break;

        double sum[2] = {0.0, 0.0};
        std::size_t count[2] = {0, 0};
        for (std::size_t i = 0; i < n; ++i) {
            sum[run.assignment[i]] += values[i];
            ++count[run.assignment[i]];
        }
        for (int c = 0; c < 2; ++c) {
            if (count[c] == 0) {
                // re-seed an emptied cluster at the point farthest from the other centroid
                const int other = 1 - c;
                double best = -1.0;
                for (const double v : values) {
                    const double dist = std::abs(v - run.centroids[other]);
                    if (dist > best) {
                        best = dist;
                        run.centroids[c] = v;
                    }
                }
            } else {
                run.centroids[c] = sum[c] / static_cast<double>(count[c]);
            }
        }
    }

    run.inertia = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = values[i] - run.centroids[run.assignment[i]];
        run.inertia += d * d;
    }
    return run;
}

KmeansRun kmeans_best(const std::vector<double>& values, std::uint64_t seed, int restarts) {
    bool degenerate = true;
    for (const double v : values) {
        if (v != values.front()) degenerate = false;
    }
    if (values.size() < 2 || degenerate) {
        throw DegenerateSeriesError("k-means needs at least two distinct values");
    }
    KmeansRun best;
    for (int r = 0; r < restarts; ++r) {
        Rng rng(mix_seed(seed, static_cast<std::uint64_t>(r)));
        KmeansRun run = kmeans_once(values, rng);
        if (run.inertia < best.inertia) best = std::move(run);
    }
    return best;
}

} // namespace

BaselineFlagSet kmeans_detect(const std::vector<double>& series, std::size_t test_start,
                              std::uint64_t seed, int restarts) {
    if (test_start > series.size()) throw ShapeError("test range starts past the series end");
    const KmeansRun best = kmeans_best(series, seed, restarts);

    std::size_t count[2] = {0, 0};
    for (const int a : best.assignment) ++count[a];
    int positive;
    if (count[0] != count[1]) {
        positive = count[0] < count[1] ? 0 : 1;
    } else {
        positive = best.centroids[0] > best.centroids[1] ? 0 : 1;
    }
    const int normal = 1 - positive;

    BaselineFlagSet out;
    out.method = "kmeans";
    for (std::size_t i = test_start; i < series.size(); ++i) {
        out.flags.push_back(best.assignment[i] == positive);
        out.scores.push_back(std::abs(series[i] - best.centroids[normal]));
    }
    return out;
}

double kmeans_best_inertia(const std::vector<double>& series, std::uint64_t seed, int restarts) {
    return kmeans_best(series, seed, restarts).inertia;
}

} // namespace fraudts
