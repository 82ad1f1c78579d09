#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

namespace fraudts {

enum class AdfRegression {
    Constant,      ///< drift term only (default)
    ConstantTrend, ///< drift plus linear trend
};

struct AdfResult {
    double t_statistic = 0.0;
    double p_value = 1.0;
    std::size_t lags_used = 0;
    bool stationary = false; ///< p_value < significance
};

struct Correlogram {
    std::vector<double> acf;  ///< lags 1..L
    std::vector<double> pacf; ///< lags 1..L
    double confidence_band = 0.0; ///< +-1.96/sqrt(n)
    std::size_t n = 0;
};

struct LjungBoxResult {
    double q_statistic = 0.0;
    double p_value = 1.0;
    std::size_t lags = 0;
    std::size_t dof = 0;
};

/**
 * Augmented Dickey-Fuller unit-root test.
 *
 * Regresses dx_t on x_{t-1}, lagged differences and the deterministic terms;
 * the t-statistic of the x_{t-1} coefficient is mapped to a p-value with the
 * MacKinnon (1994) response-surface approximation. When auto_lag is set the
 * lag order is chosen by AIC over 0..max_lag on a common sample; max_lag
 * defaults to floor(12*(n/100)^0.25).
 */
AdfResult adf_test(const std::vector<double>& series,
                   std::optional<std::size_t> max_lag = std::nullopt,
                   double significance = 0.05,
                   AdfRegression regression = AdfRegression::Constant,
                   bool auto_lag = true);

/// MacKinnon response-surface p-value for an ADF t-statistic.
double mackinnon_pvalue(double t_statistic, AdfRegression regression);

/// Sample autocorrelations r_1..r_max_lag (biased denominator convention).
std::vector<double> acf(const std::vector<double>& series, std::size_t max_lag);

/// Partial autocorrelations via Durbin-Levinson on the sample ACF.
std::vector<double> pacf(const std::vector<double>& series, std::size_t max_lag);

/// ACF and PACF together with the white-noise confidence band.
Correlogram correlogram(const std::vector<double>& series, std::size_t max_lag);

/// Ljung-Box portmanteau test on residuals; dof = lags - fitted_params.
LjungBoxResult ljung_box(const std::vector<double>& residuals, std::size_t lags,
                         std::size_t fitted_params);

/// Candidate (p,q) orders read off the correlogram cutoff pattern.
/// Ranked, at most four, never empty.
std::vector<std::pair<std::size_t, std::size_t>> suggest_orders(const Correlogram& gram);

/// Standard normal CDF.
double normal_cdf(double x);

/// Chi-square survival function P(X > x) with k degrees of freedom.
double chi_squared_sf(double x, double k);

} // namespace fraudts
