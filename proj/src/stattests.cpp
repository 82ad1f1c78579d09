#include "fraudts/stattests.hpp"

#include "fraudts/errors.hpp"

#include <Eigen/Dense>
#include <boost/math/distributions/chi_squared.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace fraudts {

double normal_cdf(double x) {
    return 0.5 * std::erfc(-x / 1.4142135623730951);
}

double chi_squared_sf(double x, double k) {
    if (x <= 0.0) return 1.0;
    const boost::math::chi_squared dist(k);
    return boost::math::cdf(boost::math::complement(dist, x));
}

namespace {

bool is_constant(const std::vector<double>& x) {
    for (const double v : x) {
        if (v != x.front()) return false;
    }
    return true;
}

struct OlsFit {
    Eigen::VectorXd beta;
    Eigen::MatrixXd cov; ///< sigma2 * (X'X)^-1
    double ssr = 0.0;
    double loglik = 0.0;
    std::size_t nobs = 0;
    std::size_t nparams = 0;
};

OlsFit ols(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
    OlsFit fit;
    fit.nobs = static_cast<std::size_t>(X.rows());
    fit.nparams = static_cast<std::size_t>(X.cols());
    fit.beta = X.householderQr().solve(y);
    const Eigen::VectorXd resid = y - X * fit.beta;
    fit.ssr = resid.squaredNorm();
    const auto n = static_cast<double>(fit.nobs);
    fit.loglik = -0.5 * n * (std::log(2.0 * M_PI) + std::log(fit.ssr / n) + 1.0);
    const double dof = n - static_cast<double>(fit.nparams);
    const double sigma2 = dof > 0 ? fit.ssr / dof : std::numeric_limits<double>::quiet_NaN();
    const Eigen::MatrixXd xtx = X.transpose() * X;
    fit.cov = sigma2 * xtx.ldlt().solve(Eigen::MatrixXd::Identity(X.cols(), X.cols()));
    return fit;
}

double ols_aic(const OlsFit& fit) {
    return 2.0 * static_cast<double>(fit.nparams) - 2.0 * fit.loglik;
}

/// Design matrix for the ADF regression with `lags` lagged differences,
/// using observation rows t = start..n-2 of the difference series.
/// Columns: [x_{t-1}, dx_{t-1}..dx_{t-lags}, const, (trend)].
void adf_design(const std::vector<double>& x, std::size_t lags, std::size_t start,
                AdfRegression regression, Eigen::MatrixXd& X, Eigen::VectorXd& y) {
    const std::size_t ndiff = x.size() - 1;
    const std::size_t rows = ndiff - start;
    const std::size_t det_terms = regression == AdfRegression::ConstantTrend ? 2u : 1u;
    X.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(1 + lags + det_terms));
    y.resize(static_cast<Eigen::Index>(rows));
    for (std::size_t r = 0; r < rows; ++r) {
        const std::size_t t = start + r; // index into the difference series
        y(static_cast<Eigen::Index>(r)) = x[t + 1] - x[t];
        X(static_cast<Eigen::Index>(r), 0) = x[t];
        for (std::size_t j = 1; j <= lags; ++j) {
            X(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j)) =
                x[t - j + 1] - x[t - j];
        }
        X(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(1 + lags)) = 1.0;
        if (det_terms == 2) {
            X(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(2 + lags)) =
                static_cast<double>(r + 1);
        }
    }
}

// MacKinnon (1994) response-surface coefficients, constant and constant+trend
// regressions. Small-p polynomials apply below tau_star, large-p above.
struct MackinnonTable {
    double tau_max, tau_min, tau_star;
    double smallp[3];
    double largep[4];
};

const MackinnonTable kMackinnonConst = {
    2.74, -18.83, -1.61,
    {2.1659, 1.4412, 0.038269},
    {1.7339, 0.93202, -0.12745, -0.010368},
};

const MackinnonTable kMackinnonTrend = {
    0.7, -16.18, -2.89,
    {3.2512, 1.6047, 0.049588},
    {2.5261, 0.61654, -0.37956, -0.060285},
};

} // namespace

double mackinnon_pvalue(double t, AdfRegression regression) {
    const MackinnonTable& tab =
        regression == AdfRegression::ConstantTrend ? kMackinnonTrend : kMackinnonConst;
    if (t > tab.tau_max) return 1.0;
    if (t < tab.tau_min) return 0.0;
    double z;
    if (t <= tab.tau_star) {
        z = tab.smallp[0] + t * (tab.smallp[1] + t * tab.smallp[2]);
    } else {
        z = tab.largep[0] + t * (tab.largep[1] + t * (tab.largep[2] + t * tab.largep[3]));
    }
    return normal_cdf(z);
}

AdfResult adf_test(const std::vector<double>& series, std::optional<std::size_t> max_lag,
                   double significance, AdfRegression regression, bool auto_lag) {
    const std::size_t n = series.size();
    std::size_t maxlag = max_lag.value_or(static_cast<std::size_t>(
        12.0 * std::pow(static_cast<double>(n) / 100.0, 0.25)));
    if (n < 20 + maxlag) {
        throw InsufficientDataError("ADF needs at least " + std::to_string(20 + maxlag) +
                                    " observations, got " + std::to_string(n));
    }
    if (is_constant(series)) throw DegenerateSeriesError("ADF on a constant series");

    std::size_t used_lag = maxlag;
    if (auto_lag) {
        // All candidate regressions share the rows available at maxlag so the
        // AIC values are comparable.
        Eigen::MatrixXd X;
        Eigen::VectorXd y;
        adf_design(series, maxlag, maxlag, regression, X, y);
        const std::size_t det_terms = regression == AdfRegression::ConstantTrend ? 2u : 1u;
        double best_aic = std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k <= maxlag; ++k) {
            // keep x_{t-1}, the first k lagged differences and the deterministic terms
            Eigen::MatrixXd Xk(X.rows(), static_cast<Eigen::Index>(1 + k + det_terms));
            Xk.leftCols(static_cast<Eigen::Index>(1 + k)) =
                X.leftCols(static_cast<Eigen::Index>(1 + k));
            Xk.rightCols(static_cast<Eigen::Index>(det_terms)) =
                X.rightCols(static_cast<Eigen::Index>(det_terms));
            const double a = ols_aic(ols(Xk, y));
            if (a < best_aic) {
                best_aic = a;
                used_lag = k;
            }
        }
    }

    Eigen::MatrixXd X;
    Eigen::VectorXd y;
    adf_design(series, used_lag, used_lag, regression, X, y);
    const OlsFit fit = ols(X, y);
    const double se = std::sqrt(fit.cov(0, 0));
    AdfResult result;
    result.t_statistic = fit.beta(0) / se;
    result.p_value = mackinnon_pvalue(result.t_statistic, regression);
    result.lags_used = used_lag;
    result.stationary = result.p_value < significance;
    return result;
}

std::vector<double> acf(const std::vector<double>& series, std::size_t max_lag) {
    const std::size_t n = series.size();
    if (max_lag >= n) throw ConfigError("acf max_lag must be below the series length");
    if (is_constant(series)) throw DegenerateSeriesError("ACF of a constant series");

    const double mean = std::accumulate(series.begin(), series.end(), 0.0) /
                        static_cast<double>(n);
    double denom = 0.0;
    for (const double v : series) denom += (v - mean) * (v - mean);

    std::vector<double> r(max_lag);
    for (std::size_t k = 1; k <= max_lag; ++k) {
        double num = 0.0;
        for (std::size_t t = 0; t + k < n; ++t) {
            num += (series[t] - mean) * (series[t + k] - mean);
        }
        r[k - 1] = num / denom;
    }
    return r;
}

std::vector<double> pacf(const std::vector<double>& series, std::size_t max_lag) {
    const std::size_t n = series.size();
    if (max_lag >= n / 2) throw ConfigError("pacf max_lag must be below n/2");
    const std::vector<double> r = acf(series, max_lag);

    // Durbin-Levinson recursion on the sample autocorrelations.
    std::vector<double> out(max_lag, 0.0);
    std::vector<double> phi(max_lag + 1, 0.0), prev(max_lag + 1, 0.0);
    out[0] = r[0];
    phi[1] = r[0];
    for (std::size_t k = 2; k <= max_lag; ++k) {
        prev = phi;
        double num = r[k - 1];
        double den = 1.0;
        for (std::size_t j = 1; j < k; ++j) {
            num -= prev[j] * r[k - 1 - j];
            den -= prev[j] * r[j - 1];
        }
        if (std::abs(den) < 1e-14) {
            throw DegenerateSeriesError("Durbin-Levinson breakdown: singular autocorrelation");
        }
        const double last = num / den;
        phi[k] = last;
        for (std::size_t j = 1; j < k; ++j) phi[j] = prev[j] - last * prev[k - j];
        out[k - 1] = last;
    }
    return out;
}

Correlogram correlogram(const std::vector<double>& series, std::size_t max_lag) {
    Correlogram gram;
    gram.acf = acf(series, max_lag);
    gram.pacf = pacf(series, max_lag);
    gram.n = series.size();
    gram.confidence_band = 1.96 / std::sqrt(static_cast<double>(series.size()));
    return gram;
}

LjungBoxResult ljung_box(const std::vector<double>& residuals, std::size_t lags,
                         std::size_t fitted_params) {
    if (lags <= fitted_params) {
        throw ConfigError("ljung_box needs lags > fitted_params");
    }
    const std::size_t n = residuals.size();
    if (n <= lags) throw InsufficientDataError("ljung_box needs more observations than lags");

    const std::vector<double> r = acf(residuals, lags);
    double q = 0.0;
    for (std::size_t k = 1; k <= lags; ++k) {
        q += r[k - 1] * r[k - 1] / static_cast<double>(n - k);
    }
    q *= static_cast<double>(n) * (static_cast<double>(n) + 2.0);

    LjungBoxResult result;
    result.q_statistic = q;
    result.lags = lags;
    result.dof = lags - fitted_params;
    result.p_value = chi_squared_sf(q, static_cast<double>(result.dof));
    return result;
}

namespace {

constexpr std::size_t kMaxSuggestedOrder = 4;

/// Candidate single orders from one correlation sequence: every lag inside the
/// initial run of significant lags, plus any significant lag whose next three
/// lags all fall inside the band.
std::vector<std::size_t> order_candidates(const std::vector<double>& values, double band) {
    const std::size_t L = values.size();
    auto significant = [&](std::size_t lag) { return std::abs(values[lag - 1]) > band; };

    std::vector<std::size_t> cands;
    for (std::size_t k = 1; k <= L && significant(k); ++k) cands.push_back(k);
    for (std::size_t k = 1; k <= L; ++k) {
        if (!significant(k)) continue;
        bool tail_quiet = true;
        for (std::size_t j = k + 1; j <= std::min(k + 3, L); ++j) {
            if (significant(j)) tail_quiet = false;
        }
        if (tail_quiet && std::find(cands.begin(), cands.end(), k) == cands.end()) {
            cands.push_back(k);
        }
    }
    std::erase_if(cands, [](std::size_t k) { return k > kMaxSuggestedOrder; });
    std::sort(cands.begin(), cands.end());
    if (cands.empty()) cands.push_back(0);
    return cands;
}

} // namespace

std::vector<std::pair<std::size_t, std::size_t>> suggest_orders(const Correlogram& gram) {
    const std::vector<std::size_t> p_cands = order_candidates(gram.pacf, gram.confidence_band);
    const std::vector<std::size_t> q_cands = order_candidates(gram.acf, gram.confidence_band);

    if (p_cands == std::vector<std::size_t>{0} && q_cands == std::vector<std::size_t>{0}) {
        return {{1, 1}, {0, 0}};
    }

    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (const std::size_t p : p_cands) {
        for (const std::size_t q : q_cands) pairs.emplace_back(p, q);
    }
    std::stable_sort(pairs.begin(), pairs.end(), [](const auto& a, const auto& b) {
        return a.first + a.second != b.first + b.second ? a.first + a.second < b.first + b.second
                                                        : a.first < b.first;
    });
    if (pairs.size() > 4) pairs.resize(4);
    return pairs;
}

} // namespace fraudts
