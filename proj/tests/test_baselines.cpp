#include "fraudts/baselines.hpp"

#include "fraudts/errors.hpp"
#include "fraudts/rng.hpp"

#include <doctest.h>

#include "oracles.hpp"

#include <algorithm>
#include <cmath>

using namespace fraudts;

TEST_CASE("quantiles use linear interpolation") {
    const std::vector<double> v = {1.0, 2.0, 3.0, 4.0, 100.0};
    CHECK(quantile(v, 0.25) == doctest::Approx(oracles::brute_quantile(v, 0.25)));
    CHECK(quantile(v, 0.25) == doctest::Approx(2.0));
    CHECK(quantile(v, 0.75) == doctest::Approx(4.0));
    CHECK(quantile(v, 0.0) == doctest::Approx(1.0));
    CHECK(quantile(v, 1.0) == doctest::Approx(100.0));
    Rng rng(2);
    for (int t = 0; t < 25; ++t) {
        std::vector<double> sample(3 + static_cast<std::size_t>(rng.uniform_int(0, 40)));
        for (auto& x : sample) x = rng.uniform(-5.0, 5.0);
        const double prob = rng.uniform01();
        CHECK(quantile(sample, prob) ==
              doctest::Approx(oracles::brute_quantile(sample, prob)).epsilon(1e-12));
    }
}

TEST_CASE("boxplot flags values outside the Tukey fences") {
    SUBCASE("single large outlier") {
        const std::vector<double> s = {1.0, 2.0, 3.0, 4.0, 100.0};
        const auto out = boxplot_detect(s, 0);
        CHECK(out.flags == std::vector<bool>{false, false, false, false, true});
        CHECK(out.method == "boxplot");
    }
    SUBCASE("constant series has collapsed fences and no flags") {
        const auto out = boxplot_detect(std::vector<double>(30, 6.0), 0);
        for (const bool f : out.flags) CHECK_FALSE(f);
    }
    SUBCASE("flags are restricted to the test range") {
        std::vector<double> s(40, 5.0);
        for (std::size_t i = 0; i < 20; ++i) s[i] = 5.0 + static_cast<double>(i % 3);
        s[3] = 500.0; // train-day outlier
        const auto out = boxplot_detect(s, 20);
        CHECK(out.flags.size() == 20);
        for (const bool f : out.flags) CHECK_FALSE(f);
    }
    SUBCASE("fences come from the whole series, permutation invariant") {
        Rng rng(8);
        std::vector<double> s(60);
        for (auto& v : s) v = std::floor(rng.uniform(0.0, 9.0));
        s[57] = 42.0;
        const auto base = boxplot_detect(s, 50);

        std::vector<double> permuted = s;
        // permute the train part only, so test positions stay aligned
        std::reverse(permuted.begin(), permuted.begin() + 50);
        const auto same = boxplot_detect(permuted, 50);
        CHECK(base.flags == same.flags);
    }
    CHECK_THROWS_AS(boxplot_detect({1.0, 2.0}, 0), InsufficientDataError);
}

TEST_CASE("lof scores equal one on uniform data") {
    const auto out = lof_detect(std::vector<double>(25, 3.0), 0, 5, 1.5);
    for (const double s : out.scores) CHECK(s == doctest::Approx(1.0).epsilon(1e-9));
    for (const bool f : out.flags) CHECK_FALSE(f);
}

TEST_CASE("lof matches the brute-force oracle") {
    Rng rng(12);
    for (int t = 0; t < 20; ++t) {
        const std::size_t n = 10 + static_cast<std::size_t>(rng.uniform_int(0, 40));
        const std::size_t k = 1 + static_cast<std::size_t>(rng.uniform_int(0, 6)) % (n - 1);
        std::vector<double> s(n);
        for (auto& v : s) v = rng.uniform(0.0, 10.0);
        const auto fast = lof_detect(s, 0, k, 1.5);
        const auto slow = oracles::brute_lof(s, k);
        REQUIRE(fast.scores.size() == slow.size());
        for (std::size_t i = 0; i < n; ++i) {
            CHECK(fast.scores[i] == doctest::Approx(slow[i]).epsilon(1e-9));
        }
    }
}

TEST_CASE("lof isolates a far point") {
    Rng rng(13);
    std::vector<double> s(30);
    for (auto& v : s) v = rng.uniform(0.0, 10.0);
    s[17] = 100.0;
    const auto out = lof_detect(s, 0, 5, 1.5);
    const auto max_it = std::max_element(out.scores.begin(), out.scores.end());
    CHECK(static_cast<std::size_t>(max_it - out.scores.begin()) == 17);
    CHECK(out.flags[17]);
}

TEST_CASE("lof rejects invalid neighbour counts") {
    const std::vector<double> s = {1.0, 2.0, 3.0};
    CHECK_THROWS_AS(lof_detect(s, 0, 3, 1.5), ConfigError);
    CHECK_THROWS_AS(lof_detect(s, 0, 0, 1.5), ConfigError);
}

TEST_CASE("isolation forest separates out-of-range points") {
    SUBCASE("scores live in (0,1) and rank the outlier above the median") {
        int ordered = 0;
        for (std::uint64_t seed = 0; seed < 100; ++seed) {
            Rng rng(200 + seed);
            std::vector<double> train(200);
            for (auto& v : train) v = rng.uniform(0.0, 10.0);
            std::vector<double> sorted = train;
            std::sort(sorted.begin(), sorted.end());
            const double median = sorted[100];
            const auto out = iforest_detect(train, {100.0, median}, 100, 256, seed);
            for (const double s : out.scores) {
                CHECK(s > 0.0);
                CHECK(s < 1.0);
            }
            if (out.scores[0] > out.scores[1]) ++ordered;
        }
        CHECK(ordered == 100);
    }
    SUBCASE("far test point flagged, in-range point not, in nearly all seeds") {
        int good = 0;
        for (std::uint64_t seed = 0; seed < 100; ++seed) {
            Rng rng(400 + seed);
            std::vector<double> train(200);
            for (auto& v : train) v = rng.uniform(0.0, 10.0);
            const auto out = iforest_detect(train, {100.0, 5.0}, 100, 256, seed);
            if (out.flags[0] && !out.flags[1]) ++good;
        }
        CHECK(good >= 95);
    }
    SUBCASE("subsample of one yields uniform scores") {
        const std::vector<double> train = {1.0, 2.0, 3.0, 4.0};
        const auto out = iforest_detect(train, {0.0, 2.5, 99.0}, 50, 1, 5);
        CHECK(out.scores[0] == out.scores[1]);
        CHECK(out.scores[1] == out.scores[2]);
    }
    SUBCASE("deterministic under seed") {
        const std::vector<double> train = {1.0, 5.0, 2.0, 8.0, 3.0, 7.0, 4.0, 6.0};
        const auto a = iforest_detect(train, {2.5, 50.0}, 64, 8, 99);
        const auto b = iforest_detect(train, {2.5, 50.0}, 64, 8, 99);
        CHECK(a.scores == b.scores);
    }
    CHECK_THROWS_AS(iforest_detect({}, {1.0}, 10, 8, 1), NoDataError);
    CHECK_THROWS_AS(iforest_detect({1.0}, {1.0}, 0, 8, 1), ConfigError);
}

TEST_CASE("k-means flags the minority cluster") {
    SUBCASE("clear two-group structure") {
        std::vector<double> s;
        for (int i = 0; i < 90; ++i) s.push_back(i % 2 == 0 ? 0.0 : 1.0);
        for (int i = 0; i < 10; ++i) s.push_back(50.0);
        const auto out = kmeans_detect(s, 0, 3);
        for (std::size_t i = 0; i < 90; ++i) CHECK_FALSE(out.flags[i]);
        for (std::size_t i = 90; i < 100; ++i) CHECK(out.flags[i]);
        CHECK(kmeans_best_inertia(s, 3) ==
              doctest::Approx(oracles::brute_kmeans2_inertia(s)).epsilon(1e-9));
    }
    SUBCASE("size tie goes to the larger centroid") {
        std::vector<double> s;
        for (int i = 0; i < 10; ++i) s.push_back(1.0);
        for (int i = 0; i < 10; ++i) s.push_back(9.0);
        const auto out = kmeans_detect(s, 0, 7);
        for (std::size_t i = 0; i < 10; ++i) CHECK_FALSE(out.flags[i]);
        for (std::size_t i = 10; i < 20; ++i) CHECK(out.flags[i]);
    }
    SUBCASE("restarted inertia reaches the one-dimensional global optimum") {
        Rng rng(44);
        for (int t = 0; t < 10; ++t) {
            std::vector<double> s(20 + static_cast<std::size_t>(rng.uniform_int(0, 80)));
            for (auto& v : s) v = std::floor(rng.uniform(0.0, 12.0));
            if (std::all_of(s.begin(), s.end(), [&](double v) { return v == s.front(); })) {
                s.back() += 1.0;
            }
            CHECK(kmeans_best_inertia(s, 1000 + static_cast<std::uint64_t>(t)) ==
                  doctest::Approx(oracles::brute_kmeans2_inertia(s)).epsilon(1e-9));
        }
    }
    CHECK_THROWS_AS(kmeans_detect(std::vector<double>(20, 4.0), 0, 1), DegenerateSeriesError);
    CHECK_THROWS_AS(kmeans_detect({5.0}, 0, 1), DegenerateSeriesError);
}
