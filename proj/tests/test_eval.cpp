#include "fraudts/eval.hpp"

#include "fraudts/errors.hpp"
#include "fraudts/rng.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>

using namespace fraudts;

namespace {

SplitSeries toy_split(std::size_t train, std::size_t test,
                      std::vector<std::size_t> fraud_days = {}) {
    DailyCountSeries s;
    s.customer_id = "toy";
    s.total_counts.assign(train + test, 5);
    s.fraud_counts.assign(train + test, 0);
    for (const std::size_t d : fraud_days) {
        s.fraud_counts[d] = 1;
    }
    SplitSeries sp;
    sp.series = std::move(s);
    sp.train_len = train;
    sp.test_len = test;
    sp.ratio = static_cast<double>(train) / static_cast<double>(train + test);
    return sp;
}

} // namespace

TEST_CASE("confusion counts partition the test days") {
    SUBCASE("perfect agreement") {
        const std::vector<bool> flags = {true, false, true, false};
        const auto c = confusion(flags, flags);
        CHECK(c.tp == 2);
        CHECK(c.tn == 2);
        CHECK(c.fp == 0);
        CHECK(c.fn == 0);
    }
    SUBCASE("no flags raised over two fraud days") {
        const std::vector<bool> flags(10, false);
        std::vector<bool> truth(10, false);
        truth[2] = truth[7] = true;
        const auto c = confusion(flags, truth);
        CHECK(c.fn == 2);
        CHECK(c.tn == 8);
        CHECK(c.tp + c.fp + c.fn + c.tn == 10);
    }
    SUBCASE("random vectors match a double-loop count") {
        Rng rng(1);
        for (int t = 0; t < 50; ++t) {
            std::vector<bool> flags(20), truth(20);
            for (std::size_t i = 0; i < 20; ++i) {
                flags[i] = rng.uniform01() < 0.4;
                truth[i] = rng.uniform01() < 0.3;
            }
            std::int64_t tp = 0, fp = 0, fn = 0, tn = 0;
            for (std::size_t i = 0; i < flags.size(); ++i) {
                for (int rep = 0; rep < 1; ++rep) {
                    if (flags[i]) {
                        if (truth[i]) ++tp; else ++fp;
                    } else {
                        if (truth[i]) ++fn; else ++tn;
                    }
                }
            }
            const auto c = confusion(flags, truth);
            CHECK(c.tp == tp);
            CHECK(c.fp == fp);
            CHECK(c.fn == fn);
            CHECK(c.tn == tn);
        }
    }
    CHECK_THROWS_AS(confusion({true}, {true, false}), ShapeError);
}

TEST_CASE("metrics follow the precision/recall/f definitions") {
    SUBCASE("direct arithmetic") {
        const auto m = metrics({1, 1, 0, 5});
        CHECK(*m.precision == doctest::Approx(0.5));
        CHECK(*m.recall == doctest::Approx(1.0));
        CHECK(*m.f_measure == doctest::Approx(2.0 / 3.0));
    }
    SUBCASE("undefined markers") {
        const auto no_flags = metrics({0, 0, 3, 7});
        CHECK_FALSE(no_flags.precision.has_value());
        CHECK(*no_flags.recall == doctest::Approx(0.0));
        CHECK_FALSE(no_flags.f_measure.has_value());

        const auto no_frauds = metrics({0, 2, 0, 8});
        CHECK_FALSE(no_frauds.recall.has_value());
        CHECK(*no_frauds.precision == doctest::Approx(0.0));

        const auto both_zero = metrics({0, 1, 1, 8});
        CHECK(*both_zero.precision == 0.0);
        CHECK(*both_zero.recall == 0.0);
        CHECK_FALSE(both_zero.f_measure.has_value()); // P+R == 0
    }
    SUBCASE("swapping flags and truth swaps precision and recall") {
        Rng rng(2);
        for (int t = 0; t < 30; ++t) {
            std::vector<bool> flags(15), truth(15);
            for (std::size_t i = 0; i < 15; ++i) {
                flags[i] = rng.uniform01() < 0.5;
                truth[i] = rng.uniform01() < 0.5;
            }
            const auto a = metrics(confusion(flags, truth));
            const auto b = metrics(confusion(truth, flags));
            CHECK(a.precision.has_value() == b.recall.has_value());
            if (a.precision && b.recall) {
                CHECK(*a.precision == doctest::Approx(*b.recall));
            }
            if (a.recall && b.precision) {
                CHECK(*a.recall == doctest::Approx(*b.precision));
            }
        }
    }
    SUBCASE("f is bounded by max(P,R) and by twice either") {
        Rng rng(3);
        for (int t = 0; t < 100; ++t) {
            ConfusionCounts c;
            c.tp = rng.uniform_int(0, 10);
            c.fp = rng.uniform_int(0, 10);
            c.fn = rng.uniform_int(0, 10);
            c.tn = rng.uniform_int(0, 10);
            const auto m = metrics(c);
            if (!m.f_measure) continue;
            CHECK(*m.f_measure <= std::max(*m.precision, *m.recall) + 1e-12);
            CHECK(*m.f_measure <= 2.0 * *m.precision + 1e-12);
            CHECK(*m.f_measure <= 2.0 * *m.recall + 1e-12);
        }
    }
}

TEST_CASE("the aggregate F convention is the mean of per-series F values") {
    // per-series pairs averaging to P=50%, R=66.67%
    const MetricValues a = metrics({1, 2, 2, 5});  // P=1/3, R=1/3, F=1/3
    const MetricValues b = metrics({2, 1, 0, 7});  // P=2/3, R=1,   F=4/5
    CHECK(*a.precision == doctest::Approx(1.0 / 3.0));
    CHECK(*b.precision == doctest::Approx(2.0 / 3.0));
    const double mean_p = (*a.precision + *b.precision) / 2.0;
    const double mean_r = (*a.recall + *b.recall) / 2.0;
    const double mean_f = (*a.f_measure + *b.f_measure) / 2.0;
    CHECK(mean_p == doctest::Approx(0.5));
    CHECK(mean_r == doctest::Approx(2.0 / 3.0));

    // the harmonic mean of the aggregates is a different number
    const double f_of_means = 2.0 * mean_p * mean_r / (mean_p + mean_r);
    CHECK(f_of_means == doctest::Approx(0.5714).epsilon(1e-3));
    CHECK(std::abs(f_of_means - 0.5556) > 0.01);
    CHECK(mean_f != doctest::Approx(f_of_means));
}

TEST_CASE("inject_frauds adds one seeded burst inside the test window") {
    const SplitSeries base = toy_split(70, 30);
    InjectionSpec spec;
    spec.seed = 42;

    SUBCASE("deterministic under seed") {
        const SplitSeries a = inject_frauds(base, spec);
        const SplitSeries b = inject_frauds(base, spec);
        CHECK(a.series.total_counts == b.series.total_counts);
        CHECK(a.series.fraud_counts == b.series.fraud_counts);
    }
    SUBCASE("conservation and train immutability") {
        for (std::uint64_t seed = 0; seed < 50; ++seed) {
            InjectionSpec s2 = spec;
            s2.seed = seed;
            const SplitSeries injected = inject_frauds(base, s2);
            std::int64_t added = 0;
            for (std::size_t i = 0; i < injected.series.size(); ++i) {
                const std::int64_t delta =
                    injected.series.total_counts[i] - base.series.total_counts[i];
                CHECK(delta >= 0);
                if (i < base.train_len) CHECK(delta == 0);
                added += delta;
            }
            CHECK(added >= 1);
            CHECK(added <= 8);
            CHECK(injected.test_fraud_days() >= 1);
        }
    }
    SUBCASE("burst sizes are roughly uniform on 1..8") {
        std::vector<int> counts(9, 0);
        const int draws = 2000;
        for (int i = 0; i < draws; ++i) {
            InjectionSpec s2 = spec;
            s2.seed = 10000 + static_cast<std::uint64_t>(i);
            const SplitSeries injected = inject_frauds(base, s2);
            std::int64_t added = 0;
            for (std::size_t d = 0; d < injected.series.size(); ++d) {
                added += injected.series.total_counts[d] - base.series.total_counts[d];
            }
            ++counts[static_cast<std::size_t>(added)];
        }
        for (int u = 1; u <= 8; ++u) {
            const double freq = static_cast<double>(counts[static_cast<std::size_t>(u)]) / draws;
            CHECK(freq > 0.125 - 0.03);
            CHECK(freq < 0.125 + 0.03);
        }
    }
    CHECK_THROWS_AS(inject_frauds(toy_split(10, 0), spec), NoDataError);
    InjectionSpec bad;
    bad.count_min = 5;
    bad.count_max = 2;
    CHECK_THROWS_AS(inject_frauds(base, bad), ConfigError);
}

namespace {

DetectorFactory truth_echo_detector(const std::string& name) {
    DetectorFactory f;
    f.name = name;
    f.bind = [](const SplitSeries&) -> SeriesRunner {
        return [](const SplitSeries& variant, std::uint64_t) { return variant.test_truth(); };
    };
    return f;
}

} // namespace

TEST_CASE("run_experiment aggregates per-series metrics") {
    SUBCASE("a perfect detector scores one everywhere") {
        const SplitSeries s = toy_split(70, 30, {80});
        const auto report = run_experiment({s}, {truth_echo_detector("echo")}, std::nullopt);
        const auto& m = report.per_method.at("echo");
        CHECK(*m.aggregate.precision == doctest::Approx(1.0));
        CHECK(*m.aggregate.recall == doctest::Approx(1.0));
        CHECK(*m.aggregate.f_measure == doctest::Approx(1.0));
    }
    SUBCASE("aggregate is the mean of per-series values") {
        // series one: flags day 80 and 81, fraud on 80 only -> P=1/2 R=1 F=2/3
        SplitSeries s1 = toy_split(70, 30, {80});
        s1.series.customer_id = "one";
        std::vector<bool> f1(30, false);
        f1[10] = f1[11] = true;
        // series two: flags exactly the two fraud days of five -> P=1 R=1 F=1... use partial
        SplitSeries s2 = toy_split(70, 30, {75, 90});
        s2.series.customer_id = "two";
        std::vector<bool> f2(30, false);
        f2[5] = true; // catches one of the two frauds

        DetectorFactory d;
        d.name = "mix";
        d.bind = [f1, f2](const SplitSeries& base) -> SeriesRunner {
            const bool first = base.series.customer_id == "one";
            return [first, f1, f2](const SplitSeries&, std::uint64_t) {
                return first ? f1 : f2;
            };
        };
        const auto report = run_experiment({s1, s2}, {d}, std::nullopt);
        const auto& m = report.per_method.at("mix");
        const auto m1 = metrics(confusion(f1, s1.test_truth()));
        const auto m2 = metrics(confusion(f2, s2.test_truth()));
        CHECK(*m.aggregate.f_measure ==
              doctest::Approx((*m1.f_measure + *m2.f_measure) / 2.0));
        CHECK(*m.aggregate.precision ==
              doctest::Approx((*m1.precision + *m2.precision) / 2.0));
        CHECK(m.per_series.size() == 2);
    }
    SUBCASE("two series with F 0.4 and 0.6 average to 0.5") {
        // F = 0.4: P=R=0.4 via tp=2 fp=3 fn=3 ; F=0.6: P=R=0.6 via tp=3 fp=2 fn=2
        const auto f_a = metrics({2, 3, 3, 0}).f_measure;
        const auto f_b = metrics({3, 2, 2, 0}).f_measure;
        CHECK(*f_a == doctest::Approx(0.4));
        CHECK(*f_b == doctest::Approx(0.6));
        std::vector<std::optional<double>> fs = {f_a, f_b};
        CHECK(*mean_defined(fs) == doctest::Approx(0.5));
    }
    SUBCASE("ineligible series without an injection spec are skipped with a warning") {
        const SplitSeries clean = toy_split(70, 30); // no frauds anywhere
        const auto report = run_experiment({clean}, {truth_echo_detector("echo")}, std::nullopt);
        CHECK(report.per_method.at("echo").per_series.empty());
        REQUIRE(report.warnings.size() == 1);
        CHECK(report.warnings[0].find("no fraud in test") != std::string::npos);
    }
    SUBCASE("ineligible series are re-included through injection") {
        const SplitSeries clean = toy_split(70, 30);
        InjectionSpec spec;
        spec.seed = 7;
        spec.repetitions = 25;
        const auto report = run_experiment({clean}, {truth_echo_detector("echo")}, spec);
        const auto& m = report.per_method.at("echo");
        REQUIRE(m.per_series.size() == 1);
        CHECK(*m.aggregate.recall == doctest::Approx(1.0));
        CHECK(*m.aggregate.precision == doctest::Approx(1.0));
    }
    SUBCASE("failing detectors are excluded with a warning") {
        const SplitSeries s = toy_split(70, 30, {80});
        DetectorFactory bad;
        bad.name = "broken";
        bad.bind = [](const SplitSeries&) -> SeriesRunner {
            throw DegenerateSeriesError("cannot bind");
        };
        const auto report =
            run_experiment({s}, {bad, truth_echo_detector("echo")}, std::nullopt);
        CHECK(report.per_method.at("broken").per_series.empty());
        CHECK_FALSE(report.per_method.at("broken").aggregate.precision.has_value());
        CHECK(*report.per_method.at("echo").aggregate.recall == doctest::Approx(1.0));
        REQUIRE_FALSE(report.warnings.empty());
        CHECK(report.warnings[0].find("broken") != std::string::npos);
    }
}

TEST_CASE("report serialisation renders the metrics grid") {
    const SplitSeries s = toy_split(70, 30, {80});
    const auto report = run_experiment({s}, {truth_echo_detector("echo")}, std::nullopt);
    const std::string csv = report_to_csv(report);
    CHECK(csv.find("METRICS,echo") == 0);
    CHECK(csv.find("Precision,100.00%") != std::string::npos);
    CHECK(csv.find("Recall,100.00%") != std::string::npos);
    CHECK(csv.find("F-Measure,100.00%") != std::string::npos);
    const std::string json = report_to_json(report);
    CHECK(json.find("\"echo\"") != std::string::npos);
    CHECK(json.find("\"precision\": 1.0") != std::string::npos);
}
