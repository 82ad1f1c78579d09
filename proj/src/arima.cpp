#include "fraudts/arima.hpp"

#include "fraudts/errors.hpp"
#include "fraudts/rng.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace fraudts {

namespace {

constexpr double kPartialBound = 8.0; ///< clamp for atanh-space parameters

double mean_of(const std::vector<double>& x) {
    return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

/// Roots of 1 - sum(a_i z^i) via the companion matrix; returns the smallest
/// root modulus (reciprocal of the largest companion eigenvalue modulus).
double min_root_modulus(const std::vector<double>& a) {
    std::size_t m = a.size();
    while (m > 0 && a[m - 1] == 0.0) --m;
    if (m == 0) return std::numeric_limits<double>::infinity();
    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(m),
                                                      static_cast<Eigen::Index>(m));
    for (std::size_t i = 0; i < m; ++i) companion(0, static_cast<Eigen::Index>(i)) = a[i];
    for (std::size_t i = 1; i < m; ++i) {
        companion(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i - 1)) = 1.0;
    }
    const auto eigenvalues = companion.eigenvalues();
    double max_mod = 0.0;
    for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) {
        max_mod = std::max(max_mod, std::abs(eigenvalues(i)));
    }
    return max_mod == 0.0 ? std::numeric_limits<double>::infinity() : 1.0 / max_mod;
}

std::vector<double> negated(const std::vector<double>& v) {
    std::vector<double> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = -v[i];
    return out;
}

/// Durbin-Levinson map from partial autocorrelations to AR coefficients
/// (1 - sum(phi z) stationary). With sign = +1 the map produces MA
/// coefficients for the invertible polynomial 1 + sum(theta z).
std::vector<double> partials_to_coeffs(const std::vector<double>& r, double sign) {
    std::vector<double> out(r);
    for (std::size_t k = 1; k < r.size(); ++k) {
        const double a = out[k];
        std::vector<double> tmp(out.begin(), out.begin() + static_cast<std::ptrdiff_t>(k));
        for (std::size_t i = 0; i < k; ++i) tmp[i] = out[i] + sign * a * out[k - 1 - i];
        std::copy(tmp.begin(), tmp.end(), out.begin());
    }
    return out;
}

/// Inverse of partials_to_coeffs; empty result when the polynomial is not in
/// the stationary/invertible region.
std::optional<std::vector<double>> coeffs_to_partials(const std::vector<double>& c, double sign) {
    std::vector<double> work(c);
    std::vector<double> partials(c.size());
    for (std::size_t k = c.size(); k-- > 0;) {
        const double a = work[k];
        if (!(std::abs(a) < 1.0)) return std::nullopt;
        partials[k] = a;
        if (k == 0) break;
        std::vector<double> prev(k);
        const double denom = 1.0 - a * a;
        for (std::size_t i = 0; i < k; ++i) {
            prev[i] = (work[i] - sign * a * work[k - 1 - i]) / denom;
        }
        std::copy(prev.begin(), prev.end(), work.begin());
    }
    return partials;
}

double clamp_partial(double z) { return std::clamp(z, -kPartialBound, kPartialBound); }

/// Unconstrained optimisation vector: [mu, atanh(ar partials), atanh(ma partials)].
struct Parametrization {
    std::size_t p, q;

    struct Natural {
        double mu;
        std::vector<double> phi;
        std::vector<double> theta;
    };

    Natural to_natural(const Eigen::VectorXd& z) const {
        Natural nat;
        nat.mu = z(0);
        std::vector<double> rp(p), rq(q);
        for (std::size_t i = 0; i < p; ++i) rp[i] = std::tanh(clamp_partial(z(1 + i)));
        for (std::size_t j = 0; j < q; ++j) rq[j] = std::tanh(clamp_partial(z(1 + p + j)));
        nat.phi = partials_to_coeffs(rp, -1.0);
        nat.theta = partials_to_coeffs(rq, +1.0);
        return nat;
    }

    /// Inverse map; shrinks coefficients toward zero until they enter the
    /// stationary/invertible region.
    Eigen::VectorXd from_natural(double mu, std::vector<double> phi,
                                 std::vector<double> theta) const {
        auto shrink_until_valid = [](std::vector<double>& c, double sign) {
            for (int tries = 0; tries < 60; ++tries) {
                if (auto r = coeffs_to_partials(c, sign)) {
                    bool ok = true;
                    for (const double v : *r) {
                        if (!(std::abs(v) < 0.9999999)) ok = false;
                    }
                    if (ok) return *r;
                }
                for (double& v : c) v *= 0.9;
            }
            return std::vector<double>(c.size(), 0.0);
        };
        const std::vector<double> rp = shrink_until_valid(phi, -1.0);
        const std::vector<double> rq = shrink_until_valid(theta, +1.0);
        Eigen::VectorXd z(1 + p + q);
        z(0) = mu;
        for (std::size_t i = 0; i < p; ++i) z(1 + static_cast<Eigen::Index>(i)) = std::atanh(rp[i]);
        for (std::size_t j = 0; j < q; ++j) {
            z(1 + static_cast<Eigen::Index>(p + j)) = std::atanh(rq[j]);
        }
        return z;
    }
};

/// Innovations of the differenced series under the conditional scheme:
/// pre-sample deviations and innovations are zero.
void css_innovations(const std::vector<double>& w, double mu, const std::vector<double>& phi,
                     const std::vector<double>& theta, std::vector<double>& e) {
    const std::size_t n = w.size();
    e.resize(n);
    for (std::size_t t = 0; t < n; ++t) {
        double pred = 0.0;
        for (std::size_t i = 1; i <= phi.size(); ++i) {
            if (t >= i) pred += phi[i - 1] * (w[t - i] - mu);
        }
        for (std::size_t j = 1; j <= theta.size(); ++j) {
            if (t >= j) pred += theta[j - 1] * e[t - j];
        }
        e[t] = (w[t] - mu) - pred;
    }
}

double css_loglik(const std::vector<double>& w, double mu, const std::vector<double>& phi,
                  const std::vector<double>& theta, std::vector<double>& scratch) {
    css_innovations(w, mu, phi, theta, scratch);
    double ssr = 0.0;
    for (const double e : scratch) ssr += e * e;
    const auto n = static_cast<double>(w.size());
    if (!(ssr > 0.0) || !std::isfinite(ssr)) return -std::numeric_limits<double>::infinity();
    return -0.5 * n * (std::log(2.0 * M_PI) + std::log(ssr / n) + 1.0);
}

/// BFGS with numerical central-difference gradients. Stops when the objective
/// improves by less than 1e-8 or after 500 iterations; throws on the latter.
template <typename F>
Eigen::VectorXd minimize_bfgs(F&& f, Eigen::VectorXd x) {
    const auto dim = x.size();
    const double grad_step = 3e-6;

    auto gradient = [&](const Eigen::VectorXd& at) {
        Eigen::VectorXd g(dim);
        Eigen::VectorXd probe = at;
        for (Eigen::Index i = 0; i < dim; ++i) {
            const double h = grad_step * std::max(1.0, std::abs(at(i)));
            probe(i) = at(i) + h;
            const double fp = f(probe);
            probe(i) = at(i) - h;
            const double fm = f(probe);
            probe(i) = at(i);
            g(i) = (fp - fm) / (2.0 * h);
        }
        return g;
    };

    double fx = f(x);
    if (!std::isfinite(fx)) throw EstimationError("objective not finite at the starting point");
    Eigen::VectorXd g = gradient(x);
    Eigen::MatrixXd H = Eigen::MatrixXd::Identity(dim, dim);

    for (int iter = 0; iter < 500; ++iter) {
        Eigen::VectorXd dir = -(H * g);
        double slope = dir.dot(g);
        if (!(slope < 0.0)) {
            H.setIdentity();
            dir = -g;
            slope = dir.dot(g);
            if (!(slope < 0.0)) return x; // zero gradient
        }

        double alpha = 1.0;
        double f_new = std::numeric_limits<double>::infinity();
        Eigen::VectorXd x_new;
        bool accepted = false;
        while (alpha > 1e-14) {
            x_new = x + alpha * dir;
            f_new = f(x_new);
            if (std::isfinite(f_new) && f_new <= fx + 1e-4 * alpha * slope) {
                accepted = true;
                break;
            }
            alpha *= 0.5;
        }
        if (!accepted) return x; // no descent possible at machine precision

        const double improvement = fx - f_new;
        const Eigen::VectorXd g_new = gradient(x_new);
        const Eigen::VectorXd s = x_new - x;
        const Eigen::VectorXd y = g_new - g;
        const double sy = s.dot(y);
        if (sy > 1e-12) {
            const Eigen::MatrixXd outer = s * y.transpose() / sy;
            H = (Eigen::MatrixXd::Identity(dim, dim) - outer) * H *
                    (Eigen::MatrixXd::Identity(dim, dim) - outer.transpose()) +
                s * s.transpose() / sy;
        }
        x = x_new;
        fx = f_new;
        g = g_new;
        if (improvement < 1e-8) return x;
    }
    throw EstimationError("BFGS did not converge within 500 iterations");
}

/// Hannan-Rissanen regression starting values on the differenced series.
void hannan_rissanen_init(const std::vector<double>& w, std::size_t p, std::size_t q,
                          std::vector<double>& phi0, std::vector<double>& theta0) {
    phi0.assign(p, 0.0);
    theta0.assign(q, 0.0);
    const std::size_t n = w.size();
    const std::size_t h = std::min(n / 4, std::max<std::size_t>(p + q, 10));
    if (h == 0 || n <= h + q + p + 2) return;

    // stage 1: long autoregression for innovation proxies
    const std::size_t rows1 = n - h;
    Eigen::MatrixXd X1(static_cast<Eigen::Index>(rows1), static_cast<Eigen::Index>(h + 1));
    Eigen::VectorXd y1(static_cast<Eigen::Index>(rows1));
    for (std::size_t r = 0; r < rows1; ++r) {
        const std::size_t t = h + r;
        y1(static_cast<Eigen::Index>(r)) = w[t];
        X1(static_cast<Eigen::Index>(r), 0) = 1.0;
        for (std::size_t i = 1; i <= h; ++i) {
            X1(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(i)) = w[t - i];
        }
    }
    const Eigen::VectorXd beta1 = X1.householderQr().solve(y1);
    std::vector<double> ehat(n, 0.0);
    for (std::size_t r = 0; r < rows1; ++r) {
        const std::size_t t = h + r;
        ehat[t] = y1(static_cast<Eigen::Index>(r)) -
                  X1.row(static_cast<Eigen::Index>(r)).dot(beta1);
    }

    // stage 2: regress on p lags of w and q lags of the proxies
    const std::size_t start = h + std::max<std::size_t>(p, q);
    if (n <= start + p + q + 2) return;
    const std::size_t rows2 = n - start;
    Eigen::MatrixXd X2(static_cast<Eigen::Index>(rows2), static_cast<Eigen::Index>(1 + p + q));
    Eigen::VectorXd y2(static_cast<Eigen::Index>(rows2));
    for (std::size_t r = 0; r < rows2; ++r) {
        const std::size_t t = start + r;
        y2(static_cast<Eigen::Index>(r)) = w[t];
        X2(static_cast<Eigen::Index>(r), 0) = 1.0;
        for (std::size_t i = 1; i <= p; ++i) {
            X2(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(i)) = w[t - i];
        }
        for (std::size_t j = 1; j <= q; ++j) {
            X2(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(p + j)) = ehat[t - j];
        }
    }
    const Eigen::VectorXd beta2 = X2.householderQr().solve(y2);
    for (std::size_t i = 0; i < p; ++i) phi0[i] = beta2(static_cast<Eigen::Index>(1 + i));
    for (std::size_t j = 0; j < q; ++j) theta0[j] = beta2(static_cast<Eigen::Index>(1 + p + j));
    for (const double v : phi0) {
        if (!std::isfinite(v)) phi0.assign(p, 0.0);
    }
    for (const double v : theta0) {
        if (!std::isfinite(v)) theta0.assign(q, 0.0);
    }
}

/// Numerical Hessian of the negative concentrated log-likelihood at the
/// optimum, in the natural (mu, phi, theta) coordinates.
Eigen::MatrixXd natural_hessian(const std::vector<double>& w, double mu,
                                const std::vector<double>& phi,
                                const std::vector<double>& theta) {
    const std::size_t p = phi.size(), q = theta.size();
    const Eigen::Index dim = static_cast<Eigen::Index>(1 + p + q);
    std::vector<double> scratch;

    auto value = [&](const Eigen::VectorXd& xi) {
        std::vector<double> ph(p), th(q);
        for (std::size_t i = 0; i < p; ++i) ph[i] = xi(static_cast<Eigen::Index>(1 + i));
        for (std::size_t j = 0; j < q; ++j) th[j] = xi(static_cast<Eigen::Index>(1 + p + j));
        return -css_loglik(w, xi(0), ph, th, scratch);
    };

    Eigen::VectorXd xi0(dim);
    xi0(0) = mu;
    for (std::size_t i = 0; i < p; ++i) xi0(static_cast<Eigen::Index>(1 + i)) = phi[i];
    for (std::size_t j = 0; j < q; ++j) xi0(static_cast<Eigen::Index>(1 + p + j)) = theta[j];

    Eigen::VectorXd h(dim);
    for (Eigen::Index i = 0; i < dim; ++i) h(i) = 1e-4 * std::max(0.01, std::abs(xi0(i)));

    Eigen::MatrixXd H(dim, dim);
    const double f0 = value(xi0);
    for (Eigen::Index i = 0; i < dim; ++i) {
        for (Eigen::Index j = i; j < dim; ++j) {
            Eigen::VectorXd xi = xi0;
            if (i == j) {
                xi(i) = xi0(i) + h(i);
                const double fp = value(xi);
                xi(i) = xi0(i) - h(i);
                const double fm = value(xi);
                H(i, i) = (fp - 2.0 * f0 + fm) / (h(i) * h(i));
            } else {
                double fpp, fpm, fmp, fmm;
                xi(i) = xi0(i) + h(i); xi(j) = xi0(j) + h(j); fpp = value(xi);
                xi(j) = xi0(j) - h(j); fpm = value(xi);
                xi(i) = xi0(i) - h(i); fmm = value(xi);
                xi(j) = xi0(j) + h(j); fmp = value(xi);
                H(i, j) = H(j, i) = (fpp - fpm - fmp + fmm) / (4.0 * h(i) * h(j));
            }
        }
    }
    return H;
}

} // namespace

std::vector<double> difference(const std::vector<double>& x, std::size_t d) {
    std::vector<double> out = x;
    for (std::size_t pass = 0; pass < d; ++pass) {
        if (out.empty()) throw InsufficientDataError("series too short to difference");
        std::vector<double> next(out.size() - 1);
        for (std::size_t i = 0; i + 1 < out.size(); ++i) next[i] = out[i + 1] - out[i];
        out = std::move(next);
    }
    return out;
}

std::vector<double> integrate(const std::vector<double>& dx, double x0) {
    std::vector<double> out;
    out.reserve(dx.size() + 1);
    out.push_back(x0);
    for (const double v : dx) out.push_back(out.back() + v);
    return out;
}

double min_ar_root_modulus(const std::vector<double>& phi) { return min_root_modulus(phi); }

double min_ma_root_modulus(const std::vector<double>& theta) {
    return min_root_modulus(negated(theta));
}

bool ar_stationary(const std::vector<double>& phi) {
    return min_ar_root_modulus(phi) > 1.0;
}

bool ma_invertible(const std::vector<double>& theta) {
    return min_ma_root_modulus(theta) > 1.0;
}

std::vector<double> simulate(const ArimaModel& model, std::size_t n, std::uint64_t seed) {
    if (n == 0) throw ConfigError("simulate needs n >= 1");
    if (model.order.d > 2) throw ConfigError("differencing degree is limited to 2");
    if (!ar_stationary(model.phi)) throw InvalidModelError("AR coefficients are not stationary");
    if (!ma_invertible(model.theta)) throw InvalidModelError("MA coefficients are not invertible");
    if (model.sigma2 < 0.0) throw InvalidModelError("negative innovation variance");

    const std::size_t p = model.phi.size(), q = model.theta.size();
    const std::size_t burn = std::max<std::size_t>(200, 10 * (p + q));
    const double sigma = std::sqrt(model.sigma2);
    Rng rng(seed);

    std::vector<double> x, omega;
    x.reserve(burn + n);
    omega.reserve(burn + n);
    for (std::size_t t = 0; t < burn + n; ++t) {
        const double w_t = sigma > 0.0 ? rng.normal(0.0, sigma) : 0.0;
        double value = model.intercept + w_t;
        for (std::size_t i = 1; i <= p; ++i) {
            if (t >= i) value += model.phi[i - 1] * x[t - i];
        }
        for (std::size_t j = 1; j <= q; ++j) {
            if (t >= j) value += model.theta[j - 1] * omega[t - j];
        }
        x.push_back(value);
        omega.push_back(w_t);
    }
    std::vector<double> out(x.begin() + static_cast<std::ptrdiff_t>(burn), x.end());
    for (std::size_t pass = 0; pass < model.order.d; ++pass) {
        double acc = 0.0;
        for (double& v : out) {
            acc += v;
            v = acc;
        }
    }
    return out;
}

ArimaModel fit(const std::vector<double>& series, const ArimaOrder& order) {
    if (order.d > 2) throw ConfigError("differencing degree is limited to 2");
    const std::size_t needed = 10 * (order.p + order.q + 1) + order.d;
    if (series.size() < needed) {
        throw InsufficientDataError("fit needs at least " + std::to_string(needed) +
                                    " observations for this order, got " +
                                    std::to_string(series.size()));
    }
    const std::vector<double> w = difference(series, order.d);
    const bool constant = std::all_of(w.begin(), w.end(), [&](double v) { return v == w.front(); });
    if (constant) throw DegenerateSeriesError("series constant after differencing");

    ArimaModel model;
    model.order = order;
    const std::size_t p = order.p, q = order.q;
    const auto n = static_cast<double>(w.size());

    std::vector<double> scratch;
    if (p + q == 0) {
        // closed-form conditional MLE for the null model
        model.mu = mean_of(w);
        css_innovations(w, model.mu, {}, {}, scratch);
    } else {
        const Parametrization param{p, q};
        auto objective = [&](const Eigen::VectorXd& z) {
            const auto nat = param.to_natural(z);
            return -css_loglik(w, nat.mu, nat.phi, nat.theta, scratch);
        };

        std::vector<double> phi0, theta0;
        hannan_rissanen_init(w, p, q, phi0, theta0);
        const double mu0 = mean_of(w);

        Eigen::VectorXd best = minimize_bfgs(objective, param.from_natural(mu0, phi0, theta0));
        double best_f = objective(best);

        // the null point (phi=theta=0) is always admissible; never end below it
        const Eigen::VectorXd null_start =
            param.from_natural(mu0, std::vector<double>(p, 0.0), std::vector<double>(q, 0.0));
        if (objective(null_start) < best_f - 1e-10) {
            const Eigen::VectorXd alt = minimize_bfgs(objective, null_start);
            if (objective(alt) < best_f) {
                best = alt;
                best_f = objective(alt);
            }
        }

        const auto nat = param.to_natural(best);
        model.mu = nat.mu;
        model.phi = nat.phi;
        model.theta = nat.theta;
        css_innovations(w, model.mu, model.phi, model.theta, scratch);
    }

    double ssr = 0.0;
    for (const double e : scratch) ssr += e * e;
    model.train_residuals = scratch;
    model.sigma2 = ssr / n;
    if (!(model.sigma2 > 0.0)) throw DegenerateSeriesError("zero residual variance");
    model.loglik = -0.5 * n * (std::log(2.0 * M_PI) + std::log(model.sigma2) + 1.0);
    model.aic = 2.0 * static_cast<double>(p + q + 2) - 2.0 * model.loglik;

    double phi_sum = 0.0;
    for (const double v : model.phi) phi_sum += v;
    model.intercept = model.mu * (1.0 - phi_sum);

    // standard errors from the numerical Hessian in natural coordinates;
    // the intercept's is mapped through c = mu * (1 - sum(phi))
    model.coef_stderr.assign(1 + p + q, std::numeric_limits<double>::quiet_NaN());
    const Eigen::MatrixXd H = natural_hessian(w, model.mu, model.phi, model.theta);
    const Eigen::Index dim = H.rows();
    Eigen::LDLT<Eigen::MatrixXd> solver(H);
    if (solver.info() == Eigen::Success) {
        const Eigen::MatrixXd cov = solver.solve(Eigen::MatrixXd::Identity(dim, dim));
        Eigen::VectorXd grad_c = Eigen::VectorXd::Zero(dim);
        grad_c(0) = 1.0 - phi_sum;
        for (std::size_t i = 0; i < p; ++i) {
            grad_c(static_cast<Eigen::Index>(1 + i)) = -model.mu;
        }
        const double var_c = grad_c.dot(cov * grad_c);
        if (var_c > 0.0 && std::isfinite(var_c)) model.coef_stderr[0] = std::sqrt(var_c);
        for (Eigen::Index i = 1; i < dim; ++i) {
            const double v = cov(i, i);
            if (v > 0.0 && std::isfinite(v)) {
                model.coef_stderr[static_cast<std::size_t>(i)] = std::sqrt(v);
            }
        }
    }
    return model;
}

std::vector<ForecastPoint> rolling_forecast(const ArimaModel& model,
                                            const std::vector<double>& train,
                                            const std::vector<double>& test) {
    const std::size_t d = model.order.d;
    if (train.size() < d) throw InsufficientDataError("training window shorter than d");

    std::vector<double> x = train;             // original scale history
    std::vector<double> w = difference(x, d);  // differenced history
    std::vector<double> e;                     // innovations over w
    css_innovations(w, model.mu, model.phi, model.theta, e);

    auto predict_next_w = [&]() {
        const std::size_t t = w.size();
        double pred = model.mu;
        for (std::size_t i = 1; i <= model.phi.size(); ++i) {
            if (t >= i) pred += model.phi[i - 1] * (w[t - i] - model.mu);
        }
        for (std::size_t j = 1; j <= model.theta.size(); ++j) {
            if (t >= j) pred += model.theta[j - 1] * e[t - j];
        }
        return pred;
    };

    // d-fold integration of a one-step difference forecast back to level
    auto integrate_prediction = [&](double w_pred) {
        double pred = w_pred;
        if (d >= 1) pred += x.back();
        if (d == 2) pred += x.back() - x[x.size() - 2];
        return pred;
    };

    std::vector<ForecastPoint> points;
    points.reserve(test.size());
    for (std::size_t k = 0; k < test.size(); ++k) {
        const double w_pred = predict_next_w();
        const double predicted = integrate_prediction(w_pred);
        const double actual = test[k];

        ForecastPoint pt;
        pt.day_index = static_cast<std::int64_t>(train.size() + k);
        pt.predicted = predicted;
        pt.actual = actual;
        pt.error = actual - predicted;
        points.push_back(pt);

        // observe the actual value before the next step
        x.push_back(actual);
        double w_new = actual;
        if (d >= 1) w_new -= x[x.size() - 2];
        if (d == 2) w_new -= x[x.size() - 2] - x[x.size() - 3];
        w.push_back(w_new);
        e.push_back(w_new - w_pred);
    }
    return points;
}

std::vector<CoefficientCheck> significance_check(const ArimaModel& model) {
    std::vector<CoefficientCheck> checks;
    const std::size_t p = model.phi.size(), q = model.theta.size();
    auto add = [&](const std::string& name, double estimate, std::size_t se_index) {
        CoefficientCheck c;
        c.name = name;
        c.estimate = estimate;
        c.stderr_ = se_index < model.coef_stderr.size()
                        ? model.coef_stderr[se_index]
                        : std::numeric_limits<double>::quiet_NaN();
        if (std::isfinite(c.stderr_) && c.stderr_ > 0.0) {
            c.t_ratio = estimate / c.stderr_;
            c.significant = std::abs(*c.t_ratio) > 1.96;
        }
        checks.push_back(std::move(c));
    };
    add("intercept", model.intercept, 0);
    for (std::size_t i = 0; i < p; ++i) add("ar" + std::to_string(i + 1), model.phi[i], 1 + i);
    for (std::size_t j = 0; j < q; ++j) {
        add("ma" + std::to_string(j + 1), model.theta[j], 1 + p + j);
    }
    return checks;
}

std::string model_to_json(const ArimaModel& model) {
    nlohmann::json j;
    j["order"] = {{"p", model.order.p}, {"d", model.order.d}, {"q", model.order.q}};
    j["phi"] = model.phi;
    j["theta"] = model.theta;
    j["intercept"] = model.intercept;
    j["mu"] = model.mu;
    j["sigma2"] = model.sigma2;
    j["loglik"] = model.loglik;
    j["aic"] = model.aic;
    // NaN has no JSON representation; emit null for unusable standard errors
    nlohmann::json se = nlohmann::json::array();
    for (const double v : model.coef_stderr) {
        if (std::isfinite(v)) {
            se.push_back(v);
        } else {
            se.push_back(nullptr);
        }
    }
    j["stderr"] = se;
    return j.dump(2);
}

ArimaModel model_from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    ArimaModel model;
    model.order.p = j.at("order").at("p").get<std::size_t>();
    model.order.d = j.at("order").at("d").get<std::size_t>();
    model.order.q = j.at("order").at("q").get<std::size_t>();
    model.phi = j.at("phi").get<std::vector<double>>();
    model.theta = j.at("theta").get<std::vector<double>>();
    model.intercept = j.at("intercept").get<double>();
    model.mu = j.at("mu").get<double>();
    model.sigma2 = j.at("sigma2").get<double>();
    model.loglik = j.at("loglik").get<double>();
    if (j.contains("aic")) model.aic = j.at("aic").get<double>();
    if (j.contains("stderr")) {
        for (const auto& v : j.at("stderr")) {
            model.coef_stderr.push_back(
                v.is_null() ? std::numeric_limits<double>::quiet_NaN() : v.get<double>());
        }
    }
    if (model.phi.size() != model.order.p || model.theta.size() != model.order.q) {
        throw DataFormatError("model JSON order does not match coefficient counts");
    }
    return model;
}

} // namespace fraudts
