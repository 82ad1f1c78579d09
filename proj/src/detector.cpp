#include "fraudts/detector.hpp"

#include "fraudts/errors.hpp"

#include <cmath>
#include <numeric>

namespace fraudts {

std::vector<DetectionOutcome> detect(const std::vector<ForecastPoint>& forecasts,
                                     const std::vector<double>& train_residuals,
                                     const DetectorConfig& config) {
    return detect(forecasts, train_residuals, std::vector<bool>(forecasts.size(), false), config);
}

std::vector<DetectionOutcome> detect(const std::vector<ForecastPoint>& forecasts,
                                     const std::vector<double>& train_residuals,
                                     const std::vector<bool>& truth,
                                     const DetectorConfig& config) {
    if (config.threshold <= 0.0) throw ConfigError("detector threshold must be positive");
    if (forecasts.empty()) throw NoDataError("no forecasts to score");
    if (train_residuals.size() < 2) {
        throw DegenerateResidualsError("need at least two training residuals");
    }
    if (truth.size() != forecasts.size()) {
        throw ShapeError("truth length does not match forecast length");
    }

    const auto n = static_cast<double>(train_residuals.size());
    const double mu = std::accumulate(train_residuals.begin(), train_residuals.end(), 0.0) / n;
    double ss = 0.0;
    for (const double e : train_residuals) ss += (e - mu) * (e - mu);
    const double sigma = std::sqrt(ss / (n - 1.0));
    if (!(sigma > 0.0)) {
        throw DegenerateResidualsError("training residuals have zero standard deviation");
    }

    std::vector<DetectionOutcome> outcomes;
    outcomes.reserve(forecasts.size());
    for (std::size_t i = 0; i < forecasts.size(); ++i) {
        DetectionOutcome o;
        o.day_index = static_cast<std::int64_t>(i);
        o.z_score = (forecasts[i].error - mu) / sigma;
        o.flagged = config.two_sided ? std::abs(o.z_score) > config.threshold
                                     : o.z_score > config.threshold;
        o.actual_fraud_day = truth[i];
        outcomes.push_back(o);
    }
    return outcomes;
}

} // namespace fraudts
