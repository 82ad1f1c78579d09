#include "fraudts/detector.hpp"

#include "fraudts/errors.hpp"
#include "fraudts/rng.hpp"

#include <doctest.h>

#include <cmath>

using namespace fraudts;

namespace {

std::vector<ForecastPoint> points_from_errors(const std::vector<double>& errors) {
    std::vector<ForecastPoint> pts;
    for (std::size_t i = 0; i < errors.size(); ++i) {
        ForecastPoint p;
        p.day_index = static_cast<std::int64_t>(i);
        p.predicted = 0.0;
        p.actual = errors[i];
        p.error = errors[i];
        pts.push_back(p);
    }
    return pts;
}

ArimaModel ar1_model(double phi, double mu, double sigma2) {
    ArimaModel m;
    m.order = {1, 0, 0};
    m.phi = {phi};
    m.mu = mu;
    m.intercept = mu * (1.0 - phi);
    m.sigma2 = sigma2;
    return m;
}

} // namespace

TEST_CASE("z-scores standardise errors against the training residuals") {
    // residuals with mean 1 and sample standard deviation 2
    const std::vector<double> residuals = {-1.0, 3.0, 1.0, -1.0, 3.0, 1.0, -1.0, 3.0, 1.0};

    SUBCASE("error equal to the mean gives z=0") {
        const auto out = detect(points_from_errors({1.0}), residuals);
        CHECK(out[0].z_score == doctest::Approx(0.0));
        CHECK_FALSE(out[0].flagged);
    }
    SUBCASE("direct arithmetic: mu=0 sigma=2 error=7 flags at 3.5") {
        // mean 0, sum of squares 16, n-1 = 4 -> sample sd exactly 2
        const std::vector<double> exact = {2.0, -2.0, 2.0, -2.0, 0.0};
        const auto out = detect(points_from_errors({7.0}), exact);
        CHECK(out[0].z_score == doctest::Approx(3.5));
        CHECK(out[0].flagged);
    }
    SUBCASE("one-sided by default, two-sided behind the flag") {
        std::vector<double> exact = {2.0, -2.0, 2.0, -2.0, 0.0}; // mu=0 sigma=2
        const auto one = detect(points_from_errors({-9.0}), exact);
        CHECK(one[0].z_score == doctest::Approx(-4.5));
        CHECK_FALSE(one[0].flagged);
        DetectorConfig config;
        config.two_sided = true;
        const auto two = detect(points_from_errors({-9.0}), exact, config);
        CHECK(two[0].flagged);
    }
}

TEST_CASE("detector validates its inputs") {
    const std::vector<double> residuals = {1.0, 2.0, 3.0};
    CHECK_THROWS_AS(detect({}, residuals), NoDataError);
    CHECK_THROWS_AS(detect(points_from_errors({1.0}), {0.5}), DegenerateResidualsError);
    CHECK_THROWS_AS(detect(points_from_errors({1.0}), std::vector<double>(10, 2.0)),
                    DegenerateResidualsError);
    DetectorConfig bad;
    bad.threshold = 0.0;
    CHECK_THROWS_AS(detect(points_from_errors({1.0}), residuals, bad), ConfigError);
    CHECK_THROWS_AS(detect(points_from_errors({1.0}), residuals, {true, false}, DetectorConfig{}),
                    ShapeError);
}

TEST_CASE("flags are invariant under affine rescaling of the error scale") {
    Rng rng(5);
    std::vector<double> residuals(60);
    for (auto& v : residuals) v = rng.normal(0.5, 1.5);
    std::vector<double> errors(40);
    for (auto& v : errors) v = rng.normal(0.5, 3.0);

    const auto base = detect(points_from_errors(errors), residuals);
    const double scale = 37.5;
    std::vector<double> scaled_resid(residuals), scaled_err(errors);
    for (auto& v : scaled_resid) v *= scale;
    for (auto& v : scaled_err) v *= scale;
    const auto scaled = detect(points_from_errors(scaled_err), scaled_resid);
    for (std::size_t i = 0; i < base.size(); ++i) {
        CHECK(base[i].flagged == scaled[i].flagged);
        CHECK(base[i].z_score == doctest::Approx(scaled[i].z_score).epsilon(1e-9));
    }
}

TEST_CASE("lowering the threshold never un-flags a day") {
    Rng rng(6);
    std::vector<double> residuals(50);
    for (auto& v : residuals) v = rng.normal();
    std::vector<double> errors(30);
    for (auto& v : errors) v = rng.normal(0.0, 2.0);

    std::vector<bool> previous(errors.size(), false);
    for (const double threshold : {5.0, 3.0, 2.0, 1.0, 0.5, 0.1}) {
        DetectorConfig config;
        config.threshold = threshold;
        const auto out = detect(points_from_errors(errors), residuals, config);
        for (std::size_t i = 0; i < out.size(); ++i) {
            if (previous[i]) CHECK(out[i].flagged);
            previous[i] = out[i].flagged;
        }
    }

    DetectorConfig huge;
    huge.threshold = 1e12;
    for (const auto& o : detect(points_from_errors(errors), residuals, huge)) {
        CHECK_FALSE(o.flagged);
    }
    DetectorConfig tiny;
    tiny.threshold = 1e-12;
    const double mu = [&] {
        double s = 0.0;
        for (const double v : residuals) s += v;
        return s / static_cast<double>(residuals.size());
    }();
    for (const auto& o : detect(points_from_errors(errors), residuals, tiny)) {
        const double err = errors[static_cast<std::size_t>(o.day_index)];
        CHECK(o.flagged == (err > mu)); // margins are far above 1e-12 sigma
    }
}

TEST_CASE("an injected spike on a quiet AR(1) background is singled out") {
    int spike_hits = 0;
    int other_flags = 0;
    const int runs = 100;
    for (int run = 0; run < runs; ++run) {
        const std::uint64_t seed = 7000 + static_cast<std::uint64_t>(run);
        const auto all = simulate(ar1_model(0.5, 8.0, 1.0), 260, seed);
        const std::vector<double> train(all.begin(), all.begin() + 182);
        std::vector<double> test(all.begin() + 182, all.end());

        const ArimaModel m = fit(train, {1, 0, 0});
        double sd = 0.0, mean = 0.0;
        for (const double e : m.train_residuals) mean += e;
        mean /= static_cast<double>(m.train_residuals.size());
        for (const double e : m.train_residuals) sd += (e - mean) * (e - mean);
        sd = std::sqrt(sd / static_cast<double>(m.train_residuals.size() - 1));

        const std::size_t spike_day = 40;
        test[spike_day] += 8.0 * sd;

        const auto outcomes = detect(rolling_forecast(m, train, test), m.train_residuals);
        for (const auto& o : outcomes) {
            if (static_cast<std::size_t>(o.day_index) == spike_day) {
                if (o.flagged) ++spike_hits;
            } else if (o.flagged) {
                ++other_flags;
            }
        }
    }
    CHECK(spike_hits == runs);
    CHECK(static_cast<double>(other_flags) / runs < 0.5);
}
