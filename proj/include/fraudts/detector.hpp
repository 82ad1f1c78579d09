#pragma once

#include "fraudts/arima.hpp"

#include <cstdint>
#include <vector>

namespace fraudts {

struct DetectorConfig {
    double threshold = 3.0;
    bool two_sided = false; ///< flag |z| > threshold instead of z > threshold
};

struct DetectionOutcome {
    std::int64_t day_index = 0; ///< position within the test range
    double z_score = 0.0;
    bool flagged = false;
    bool actual_fraud_day = false;
};

/// Z-scores of rolling forecast errors against the in-sample error mean and
/// sample standard deviation (n-1 denominator); a day is flagged when the
/// z-score exceeds the threshold.
std::vector<DetectionOutcome> detect(const std::vector<ForecastPoint>& forecasts,
                                     const std::vector<double>& train_residuals,
                                     const DetectorConfig& config = {});

/// Same, with ground-truth fraud-day labels attached.
std::vector<DetectionOutcome> detect(const std::vector<ForecastPoint>& forecasts,
                                     const std::vector<double>& train_residuals,
                                     const std::vector<bool>& truth,
                                     const DetectorConfig& config = {});

} // namespace fraudts
