#include "fraudts/pipeline.hpp"

#include "fraudts/datagen.hpp"
#include "fraudts/errors.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace fraudts;
namespace fs = std::filesystem;

namespace {

ArimaModel toy_model(std::vector<double> phi, std::vector<double> theta, double mu, double sigma2,
                     std::size_t d = 0) {
    ArimaModel m;
    m.order = {phi.size(), d, theta.size()};
    m.phi = std::move(phi);
    m.theta = std::move(theta);
    m.mu = mu;
    double s = 0.0;
    for (const double v : m.phi) s += v;
    m.intercept = mu * (1.0 - s);
    m.sigma2 = sigma2;
    return m;
}

std::string file_bytes(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

} // namespace

TEST_CASE("choose_differencing mechanises the unit-root decision") {
    PipelineConfig config;
    const auto stationary = simulate(toy_model({0.5}, {}, 6.0, 1.0), 300, 2);
    CHECK(choose_differencing(stationary, config) == 0);

    const auto walk = simulate(toy_model({}, {}, 0.0, 1.0), 300, 3);
    std::vector<double> integrated(walk.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < walk.size(); ++i) {
        acc += walk[i];
        integrated[i] = acc;
    }
    CHECK(choose_differencing(integrated, config) == 1);

    std::vector<double> twice(integrated.size());
    acc = 0.0;
    for (std::size_t i = 0; i < integrated.size(); ++i) {
        acc += integrated[i];
        twice[i] = acc;
    }
    CHECK(choose_differencing(twice, config) == 2);
}

TEST_CASE("select_order picks a sane candidate for simulated processes") {
    PipelineConfig config;
    SUBCASE("AR(1)") {
        const auto s = simulate(toy_model({0.6}, {}, 8.0, 1.0), 400, 5);
        const OrderSelection sel = select_order(s, 0, config);
        CHECK(sel.model.order.p >= 1);
        CHECK_FALSE(sel.attempts.empty());
        int accepted = 0;
        for (const auto& a : sel.attempts) accepted += a.accepted ? 1 : 0;
        CHECK(accepted == 1);
    }
    SUBCASE("forced candidates are always present") {
        const auto s = simulate(toy_model({0.5}, {0.2}, 8.0, 1.0), 300, 6);
        const OrderSelection sel = select_order(s, 0, config);
        bool has_11 = false, has_12 = false;
        for (const auto& a : sel.attempts) {
            if (a.order.p == 1 && a.order.q == 1) has_11 = true;
            if (a.order.p == 1 && a.order.q == 2) has_12 = true;
        }
        CHECK(has_11);
        CHECK(has_12);
    }
}

TEST_CASE("run_series honours an explicit order") {
    const auto values = simulate(toy_model({0.5}, {0.2, 0.1}, 8.0, 1.0), 275, 7);
    DailyCountSeries series;
    series.customer_id = "s0";
    for (const double v : values) {
        series.total_counts.push_back(std::max<std::int64_t>(0, std::llround(v)));
        series.fraud_counts.push_back(0);
    }
    series.fraud_counts[250] = 1;
    series.total_counts[250] += 1;
    const SplitSeries sp = split(series, 0.7);

    PipelineConfig config;
    config.order = ArimaOrder{1, 0, 2};
    const SeriesRunResult result = run_series(sp, config);
    CHECK(result.selection.model.order == ArimaOrder{1, 0, 2});
    CHECK(result.forecasts.size() == sp.test_len);
    CHECK(result.outcomes.size() == sp.test_len);
    const std::string json = model_to_json(result.selection.model);
    CHECK(json.find("\"p\": 1") != std::string::npos);
    CHECK(json.find("\"d\": 0") != std::string::npos);
    CHECK(json.find("\"q\": 2") != std::string::npos);
}

TEST_CASE("refitting every N days keeps predictions aligned") {
    const auto values = simulate(toy_model({0.5}, {}, 8.0, 1.0), 200, 8);
    DailyCountSeries series;
    series.customer_id = "r";
    for (const double v : values) {
        series.total_counts.push_back(std::max<std::int64_t>(0, std::llround(v)));
        series.fraud_counts.push_back(0);
    }
    const SplitSeries sp = split(series, 0.7);
    PipelineConfig config;
    config.refit_every = 20;
    const ArimaModel m = fit(sp.train_values(), {1, 0, 0});
    const auto pts = forecast_with_refit(m, sp, config);
    REQUIRE(pts.size() == sp.test_len);
    for (std::size_t i = 0; i < pts.size(); ++i) {
        CHECK(pts[i].day_index == static_cast<std::int64_t>(sp.train_len + i));
        CHECK(pts[i].actual ==
              doctest::Approx(static_cast<double>(series.total_counts[sp.train_len + i])));
    }
}

TEST_CASE("run_pipeline writes the full artifact tree and is deterministic") {
    const fs::path dir = fresh_dir("fraudts_pipe");
    const auto profiles = synthetic_mixed_profiles(0.7, 99);
    const GeneratedCorpus corpus = generate_corpus(profiles, 99);
    const fs::path tx_path = dir / "tx.csv";
    write_transactions_csv(tx_path.string(), corpus.transactions);

    PipelineConfig config;
    config.input_path = tx_path.string();
    config.output_dir = (dir / "out").string();
    config.seed = 1234;
    // keep the runtime modest: baselines only (the model path is covered elsewhere)
    config.methods = {"boxplot", "kmeans"};

    const PipelineResult result = run_pipeline(config, false);
    CHECK(result.eligible.size() == 9);
    CHECK(result.rejected.size() == 15);
    CHECK(fs::exists(dir / "out" / "eligibility.json"));
    CHECK(fs::exists(dir / "out" / "report.json"));
    CHECK(fs::exists(dir / "out" / "report.csv"));
    for (const auto& id : result.eligible) {
        CHECK(fs::exists(dir / "out" / "series" / id / "model.json"));
        CHECK(fs::exists(dir / "out" / "series" / id / "detect.csv"));
        CHECK(fs::exists(dir / "out" / "series" / id / "correlogram.csv"));
        CHECK(fs::exists(dir / "out" / "series" / id / "bench_boxplot.csv"));
    }
    for (const auto& method : config.methods) {
        const auto& m = result.report.per_method.at(method);
        for (const auto& [id, values] : m.per_series) {
            if (values.precision) {
                CHECK(*values.precision >= 0.0);
                CHECK(*values.precision <= 1.0);
            }
            if (values.recall) {
                CHECK(*values.recall >= 0.0);
                CHECK(*values.recall <= 1.0);
            }
        }
    }

    const std::string first = file_bytes(dir / "out" / "report.json");
    run_pipeline(config, false);
    CHECK(file_bytes(dir / "out" / "report.json") == first);

    PipelineConfig injected = config;
    injected.output_dir = (dir / "inj").string();
    injected.injection.repetitions = 5;
    const PipelineResult with_inj = run_pipeline(injected, true);
    const auto& km = with_inj.report.per_method.at("kmeans");
    CHECK(km.per_series.size() == 24); // every series participates after injection
    const std::string inj_first = file_bytes(dir / "inj" / "report.json");
    run_pipeline(injected, true);
    CHECK(file_bytes(dir / "inj" / "report.json") == inj_first);
}

TEST_CASE("run_pipeline fails loudly on bad inputs") {
    const fs::path dir = fresh_dir("fraudts_pipe_bad");
    PipelineConfig config;
    config.output_dir = (dir / "out").string();

    config.input_path = (dir / "missing.csv").string();
    CHECK_THROWS_AS(run_pipeline(config, false), NoDataError);

    const fs::path empty_path = dir / "empty.csv";
    std::ofstream(empty_path.string()) << "";
    config.input_path = empty_path.string();
    CHECK_THROWS_AS(run_pipeline(config, false), NoDataError);

    // corpus whose only series has train-window frauds: nothing eligible
    const fs::path tx_path = dir / "tx.csv";
    std::ofstream(tx_path.string()) << "customer_id,timestamp,amount,label\n"
                                       "a,2020-01-01T10:00:00Z,5.00,1\n"
                                       "a,2020-01-02T10:00:00Z,5.00,0\n"
                                       "a,2020-01-03T10:00:00Z,5.00,0\n"
                                       "a,2020-01-04T10:00:00Z,5.00,0\n";
    config.input_path = tx_path.string();
    CHECK_THROWS_AS(run_pipeline(config, false), NoDataError);
}
