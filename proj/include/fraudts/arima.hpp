#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace fraudts {

struct ArimaOrder {
    std::size_t p = 0; ///< AR order
    std::size_t d = 0; ///< differencing degree (at most 2)
    std::size_t q = 0; ///< MA order

    bool operator==(const ArimaOrder&) const = default;
};

/**
 * Fitted ARIMA(p,d,q) model:
 *   X_t = c + omega_t + sum_i phi_i X_{t-i} + sum_j theta_j omega_{t-j}
 * applied to the d-times differenced series. The intercept c and the series
 * mean mu are related by c = mu * (1 - sum(phi)).
 */
struct ArimaModel {
    ArimaOrder order;
    std::vector<double> phi;
    std::vector<double> theta;
    double intercept = 0.0;
    double mu = 0.0;
    double sigma2 = 1.0;
    double loglik = 0.0;
    double aic = 0.0;
    /// One-step in-sample innovations on the differenced training series.
    std::vector<double> train_residuals;
    /// Standard errors, layout [intercept, phi..., theta...]; NaN when the
    /// numerical Hessian was not invertible.
    std::vector<double> coef_stderr;
};

struct ForecastPoint {
    std::int64_t day_index = 0; ///< position in the concatenated train+test series
    double predicted = 0.0;
    double actual = 0.0;
    double error = 0.0; ///< actual - predicted
};

struct CoefficientCheck {
    std::string name; ///< "intercept", "ar1".., "ma1"..
    double estimate = 0.0;
    double stderr_ = 0.0;
    std::optional<double> t_ratio; ///< absent when the standard error is unusable
    bool significant = false;      ///< |t| > 1.96
};

std::vector<double> difference(const std::vector<double>& x, std::size_t d);
/// Inverse of one differencing pass given the first original value.
std::vector<double> integrate(const std::vector<double>& dx, double x0);

/// True when 1 - sum(phi_i z^i) has all roots strictly outside the unit circle.
bool ar_stationary(const std::vector<double>& phi);
/// True when 1 + sum(theta_j z^j) has all roots strictly outside the unit circle.
bool ma_invertible(const std::vector<double>& theta);
/// Smallest root modulus of the AR / MA polynomial (infinity for empty).
double min_ar_root_modulus(const std::vector<double>& phi);
double min_ma_root_modulus(const std::vector<double>& theta);

/// Draw n values from the model with Gaussian innovations; a burn-in of
/// max(200, 10*(p+q)) samples is discarded. Deterministic under seed.
std::vector<double> simulate(const ArimaModel& model, std::size_t n, std::uint64_t seed);

/**
 * Maximum likelihood fit via the conditional (least-squares) Gaussian
 * likelihood with zero pre-sample innovations, optimised by BFGS in a
 * partial-autocorrelation reparametrisation that keeps the coefficients
 * stationary and invertible. Initial values come from Hannan-Rissanen
 * regressions; sigma2 is profiled out.
 */
ArimaModel fit(const std::vector<double>& series, const ArimaOrder& order);

/// One-step-ahead predictions over the test range: each prediction conditions
/// on everything observed so far (train plus earlier test days), with fixed
/// coefficients. Errors are actual - predicted.
std::vector<ForecastPoint> rolling_forecast(const ArimaModel& model,
                                            const std::vector<double>& train,
                                            const std::vector<double>& test);

/// Per-coefficient t-ratios against the 1.96 two-sided normal threshold.
std::vector<CoefficientCheck> significance_check(const ArimaModel& model);

std::string model_to_json(const ArimaModel& model);
ArimaModel model_from_json(const std::string& text);

} // namespace fraudts
