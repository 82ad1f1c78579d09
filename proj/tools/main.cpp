#include "fraudts/csv.hpp"
#include "fraudts/datagen.hpp"
#include "fraudts/errors.hpp"
#include "fraudts/pipeline.hpp"
#include "fraudts/rng.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

namespace {

namespace fs = std::filesystem;
using namespace fraudts;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitEstimation = 3;

std::optional<ArimaOrder> parse_order(const std::string& text) {
    if (text == "auto") return std::nullopt;
    ArimaOrder order;
    if (std::sscanf(text.c_str(), "%zu,%zu,%zu", &order.p, &order.d, &order.q) != 3) {
        throw ConfigError("--order expects 'auto' or 'p,d,q', got: " + text);
    }
    return order;
}

void write_text(const fs::path& path, const std::string& text) {
    fs::create_directories(path.parent_path().empty() ? "." : path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write file: " + path.string());
    out << text;
}

void add_pipeline_options(CLI::App* cmd, PipelineConfig& config) {
    cmd->add_option("--ratio", config.split_ratio, "train fraction of each series");
    cmd->add_option("--threshold", config.z_threshold, "z-score flag threshold");
    cmd->add_flag("--two-sided", config.two_sided, "flag |z| > threshold instead of z > threshold");
    cmd->add_option("--seed", config.seed, "master seed");
    cmd->add_option("--lof-k", config.lof_k, "LOF neighbour count");
    cmd->add_option("--lof-threshold", config.lof_threshold, "LOF flag threshold");
    cmd->add_option("--trees", config.iforest_trees, "isolation forest tree count");
    cmd->add_option("--subsample", config.iforest_subsample, "isolation forest subsample size");
    cmd->add_option("--restarts", config.kmeans_restarts, "k-means restarts");
    cmd->add_option("--adf-significance", config.adf_significance, "ADF significance level");
    cmd->add_flag("--adf-trend", config.adf_trend, "include a trend term in the ADF regression");
    cmd->add_option("--refit-every", config.refit_every,
                    "refit coefficients every N observed test days (0 = never)");
}

void validate(const PipelineConfig& config) {
    if (!(config.split_ratio > 0.0 && config.split_ratio < 1.0)) {
        throw ConfigError("--ratio must lie in (0,1)");
    }
    if (config.z_threshold <= 0.0) throw ConfigError("--threshold must be positive");
}

DailyCountSeries load_counts(const std::string& path) {
    return read_counts_csv(path, fs::path(path).stem().string());
}

int cmd_ingest(const std::string& input, const std::string& outdir, double ratio) {
    const auto transactions = read_transactions_csv(input);
    if (transactions.empty()) throw NoDataError("input contains no transactions");
    fs::create_directories(fs::path(outdir) / "counts");
    nlohmann::json report = nlohmann::json::array();
    for (const auto& series : aggregate_all(transactions)) {
        write_counts_csv((fs::path(outdir) / "counts" / (series.customer_id + ".csv")).string(),
                         series);
        const SplitSeries s = split(series, ratio);
        const EligibilityResult e = eligibility(s);
        nlohmann::json je;
        je["customer_id"] = series.customer_id;
        je["days"] = series.size();
        je["train_days"] = s.train_len;
        je["test_days"] = s.test_len;
        je["eligible"] = e.eligible;
        if (!e.eligible) je["reason"] = e.reason;
        report.push_back(je);
    }
    write_text(fs::path(outdir) / "eligibility.json", report.dump(2));
    std::cout << report.dump(2) << "\n";
    return kExitOk;
}

int cmd_diagnose(const std::string& input, const std::string& outdir,
                 const PipelineConfig& config, std::size_t max_lag) {
    const DailyCountSeries series = load_counts(input);
    const SplitSeries s = split(series, config.split_ratio);
    const std::vector<double> train = s.train_values();

    const AdfResult adf = adf_test(train, std::nullopt, config.adf_significance,
                                   config.adf_trend ? AdfRegression::ConstantTrend
                                                    : AdfRegression::Constant);
    const std::size_t lag = std::min(max_lag, train.size() / 2 - 1);
    const Correlogram gram = correlogram(train, lag);
    const LjungBoxResult lb = ljung_box(train, std::min<std::size_t>(10, lag), 0);

    fs::create_directories(outdir);
    write_correlogram_csv((fs::path(outdir) / "correlogram.csv").string(), gram);
    nlohmann::json j;
    j["adf"] = {{"t_statistic", adf.t_statistic},
                {"p_value", adf.p_value},
                {"lags_used", adf.lags_used},
                {"stationary", adf.stationary}};
    j["ljung_box"] = {{"q_statistic", lb.q_statistic},
                      {"p_value", lb.p_value},
                      {"lags", lb.lags},
                      {"dof", lb.dof}};
    nlohmann::json cands = nlohmann::json::array();
    for (const auto& [p, q] : suggest_orders(gram)) cands.push_back({{"p", p}, {"q", q}});
    j["suggested_orders"] = cands;
    write_text(fs::path(outdir) / "diagnose.json", j.dump(2));
    std::cout << j.dump(2) << "\n";
    return kExitOk;
}

int cmd_fit(const std::string& input, const std::string& order_text, const std::string& out,
            const PipelineConfig& base) {
    PipelineConfig config = base;
    config.order = parse_order(order_text);
    const DailyCountSeries series = load_counts(input);
    const SplitSeries s = split(series, config.split_ratio);
    const SeriesRunResult result = run_series(s, config);

    write_text(out, model_to_json(result.selection.model));
    nlohmann::json j = nlohmann::json::parse(series_diagnostics_json(result));
    nlohmann::json checks = nlohmann::json::array();
    for (const auto& c : significance_check(result.selection.model)) {
        nlohmann::json jc;
        jc["name"] = c.name;
        jc["estimate"] = c.estimate;
        if (c.t_ratio) {
            jc["stderr"] = c.stderr_;
            jc["t_ratio"] = *c.t_ratio;
            jc["significant"] = c.significant;
        } else {
            jc["significant"] = "not-applicable";
        }
        checks.push_back(jc);
    }
    j["coefficients"] = checks;
    std::cout << j.dump(2) << "\n";
    return kExitOk;
}

int cmd_detect(const std::string& input, const std::string& model_path, const std::string& out,
               const PipelineConfig& config) {
    std::ifstream in(model_path, std::ios::binary);
    if (!in) throw NoDataError("cannot open model file: " + model_path);
    std::ostringstream buf;
    buf << in.rdbuf();
    const ArimaModel model = model_from_json(buf.str());

    const DailyCountSeries series = load_counts(input);
    const SplitSeries s = split(series, config.split_ratio);
    const std::vector<double> train = s.train_values();
    if (train.size() <= model.order.d) throw InsufficientDataError("training window too short");

    // reconstruct the in-sample residuals from the stored coefficients
    const std::vector<double> head(train.begin(),
                                   train.begin() + static_cast<std::ptrdiff_t>(model.order.d));
    const std::vector<double> tail(train.begin() + static_cast<std::ptrdiff_t>(model.order.d),
                                   train.end());
    std::vector<double> residuals;
    for (const auto& pt : rolling_forecast(model, head, tail)) residuals.push_back(pt.error);

    const auto forecasts = forecast_with_refit(model, s, config);
    DetectorConfig det;
    det.threshold = config.z_threshold;
    det.two_sided = config.two_sided;
    const auto outcomes = detect(forecasts, residuals, s.test_truth(), det);
    write_detection_csv(out, s, forecasts, outcomes);
    std::cout << "wrote " << out << " (" << outcomes.size() << " days)\n";
    return kExitOk;
}

int cmd_bench(const std::string& input, const std::string& outdir, const std::string& methods,
              const PipelineConfig& config) {
    const DailyCountSeries series = load_counts(input);
    const SplitSeries s = split(series, config.split_ratio);
    const auto values = s.series.totals_as_double();
    fs::create_directories(outdir);

    std::stringstream list(methods);
    std::string method;
    while (std::getline(list, method, ',')) {
        BaselineFlagSet flags;
        if (method == "boxplot") {
            flags = boxplot_detect(values, s.train_len);
        } else if (method == "lof") {
            const std::size_t k = std::min(config.lof_k, values.size() - 1);
            flags = lof_detect(values, s.train_len, k, config.lof_threshold);
        } else if (method == "iforest") {
            flags = iforest_detect(s.train_values(), s.test_values(), config.iforest_trees,
                                   config.iforest_subsample, config.seed);
        } else if (method == "kmeans") {
            flags = kmeans_detect(values, s.train_len, config.seed, config.kmeans_restarts);
        } else {
            throw ConfigError("unknown method: " + method);
        }
        write_baseline_csv((fs::path(outdir) / ("bench_" + method + ".csv")).string(), s, flags);
    }
    std::cout << "wrote benchmark flags to " << outdir << "\n";
    return kExitOk;
}

int cmd_gen(const std::string& mode, std::size_t customers, const std::string& out,
            const std::string& truth_dir, double ratio, std::uint64_t seed) {
    std::vector<CustomerProfile> profiles;
    if (mode == "eligible") {
        profiles = synthetic_eligible_profiles(customers, ratio, seed);
    } else if (mode == "mixed") {
        profiles = synthetic_mixed_profiles(ratio, seed);
    } else {
        throw ConfigError("--mode must be 'eligible' or 'mixed'");
    }
    const GeneratedCorpus corpus = generate_corpus(profiles, seed);
    write_transactions_csv(out, corpus.transactions);
    if (!truth_dir.empty()) {
        fs::create_directories(truth_dir);
        for (const auto& series : corpus.truth) {
            write_counts_csv((fs::path(truth_dir) / (series.customer_id + ".csv")).string(),
                             series);
        }
    }
    std::cout << "wrote " << corpus.transactions.size() << " transactions for "
              << profiles.size() << " customers to " << out << "\n";
    return kExitOk;
}

int cmd_report(const std::string& outdir) {
    // rebuild the comparison grid from previously written detection CSVs
    ComparisonReport report;
    std::map<std::string, std::vector<std::pair<std::string, MetricValues>>> collected;
    const fs::path series_root = fs::path(outdir) / "series";
    if (!fs::exists(series_root)) throw NoDataError("no series directory under " + outdir);

    std::vector<fs::path> dirs;
    for (const auto& entry : fs::directory_iterator(series_root)) {
        if (entry.is_directory()) dirs.push_back(entry.path());
    }
    std::sort(dirs.begin(), dirs.end());
    for (const auto& dir : dirs) {
        const std::string series_id = dir.filename().string();
        std::vector<std::pair<std::string, fs::path>> files;
        if (fs::exists(dir / "detect.csv")) files.emplace_back("arima", dir / "detect.csv");
        for (const auto& entry : fs::directory_iterator(dir)) {
            const std::string name = entry.path().filename().string();
            if (name.rfind("bench_", 0) == 0 && name.size() > 10) {
                files.emplace_back(name.substr(6, name.size() - 10), entry.path());
            }
        }
        std::sort(files.begin(), files.end());
        for (const auto& [method, path] : files) {
            const CsvTable table = read_csv(path.string());
            const std::size_t flag_col = table.column("flagged");
            const std::size_t truth_col = table.column("truth");
            std::vector<bool> flags, truth;
            for (const auto& row : table.rows) {
                flags.push_back(row[flag_col] == "1");
                truth.push_back(row[truth_col] == "1");
            }
            collected[method].emplace_back(series_id, metrics(confusion(flags, truth)));
        }
    }
    if (collected.empty()) throw NoDataError("no detection CSVs under " + outdir);

    for (const std::string& method : {"arima", "boxplot", "lof", "iforest", "kmeans"}) {
        if (collected.count(method)) report.methods.push_back(method);
    }
    for (const auto& [method, entries] : collected) {
        MetricsReport mr;
        std::vector<std::optional<double>> p, r, f;
        for (const auto& [id, values] : entries) {
            mr.per_series[id] = values;
            p.push_back(values.precision);
            r.push_back(values.recall);
            f.push_back(values.f_measure);
        }
        mr.aggregate.precision = mean_defined(p);
        mr.aggregate.recall = mean_defined(r);
        mr.aggregate.f_measure = mean_defined(f);
        report.per_method[method] = std::move(mr);
    }
    write_text(fs::path(outdir) / "report.json", report_to_json(report));
    write_text(fs::path(outdir) / "report.csv", report_to_csv(report));
    std::cout << report_to_csv(report);
    return kExitOk;
}

int dispatch(int argc, char** argv) {
    CLI::App app{"ARIMA-based unsupervised fraud detection on daily transaction counts"};
    app.require_subcommand(1);
    app.set_config("--config", "", "flat key=value configuration file");

    PipelineConfig config;
    std::string input, outdir = "out", out, model_path, order_text = "auto";
    std::string methods = "boxplot,lof,iforest,kmeans";
    std::string gen_mode = "eligible", truth_dir;
    std::size_t customers = 9, max_lag = 20;

    auto* ingest_cmd = app.add_subcommand("ingest", "aggregate transactions into daily counts");
    ingest_cmd->add_option("--input", input, "transactions CSV")->required();
    ingest_cmd->add_option("--outdir", outdir, "output directory");
    ingest_cmd->add_option("--ratio", config.split_ratio, "train fraction");

    auto* diagnose_cmd =
        app.add_subcommand("diagnose", "stationarity and correlogram diagnostics");
    diagnose_cmd->add_option("--input", input, "single-series counts CSV")->required();
    diagnose_cmd->add_option("--outdir", outdir, "output directory");
    diagnose_cmd->add_option("--max-lag", max_lag, "correlogram depth");
    add_pipeline_options(diagnose_cmd, config);

    auto* fit_cmd = app.add_subcommand("fit", "estimate a model on the training window");
    fit_cmd->add_option("--input", input, "single-series counts CSV")->required();
    fit_cmd->add_option("--order", order_text, "'p,d,q' or 'auto'");
    fit_cmd->add_option("--out", out, "model JSON path")->required();
    add_pipeline_options(fit_cmd, config);

    auto* detect_cmd = app.add_subcommand("detect", "flag anomalous test days");
    detect_cmd->add_option("--input", input, "single-series counts CSV")->required();
    detect_cmd->add_option("--model", model_path, "model JSON path")->required();
    detect_cmd->add_option("--out", out, "detection CSV path")->required();
    add_pipeline_options(detect_cmd, config);

    auto* bench_cmd = app.add_subcommand("bench", "run benchmark detectors");
    bench_cmd->add_option("--input", input, "single-series counts CSV")->required();
    bench_cmd->add_option("--methods", methods, "comma-separated method list");
    bench_cmd->add_option("--outdir", outdir, "output directory");
    add_pipeline_options(bench_cmd, config);

    auto* gen_cmd = app.add_subcommand("gen", "generate a synthetic transaction corpus");
    gen_cmd->add_option("--mode", gen_mode, "'eligible' or 'mixed'");
    gen_cmd->add_option("--customers", customers, "customer count (eligible mode)");
    gen_cmd->add_option("--out", out, "transactions CSV path")->required();
    gen_cmd->add_option("--truth-dir", truth_dir, "write realised counts here");
    gen_cmd->add_option("--ratio", config.split_ratio, "train fraction");
    gen_cmd->add_option("--seed", config.seed, "generator seed");

    auto* run_cmd = app.add_subcommand("run", "end-to-end pipeline over a corpus");
    run_cmd->add_option("--input", input, "transactions CSV")->required();
    run_cmd->add_option("--outdir", outdir, "output directory");
    run_cmd->add_option("--order", order_text, "'p,d,q' or 'auto'");
    add_pipeline_options(run_cmd, config);

    auto* inject_cmd =
        app.add_subcommand("inject", "robustness experiment with injected frauds");
    inject_cmd->add_option("--input", input, "transactions CSV")->required();
    inject_cmd->add_option("--outdir", outdir, "output directory");
    inject_cmd->add_option("--order", order_text, "'p,d,q' or 'auto'");
    inject_cmd->add_option("--reps", config.injection.repetitions, "repetitions per series");
    inject_cmd->add_option("--count-min", config.injection.count_min, "smallest injected burst");
    inject_cmd->add_option("--count-max", config.injection.count_max, "largest injected burst");
    add_pipeline_options(inject_cmd, config);

    auto* report_cmd = app.add_subcommand("report", "rebuild the comparison report");
    report_cmd->add_option("--outdir", outdir, "directory with per-series detections");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }
    validate(config);

    if (ingest_cmd->parsed()) return cmd_ingest(input, outdir, config.split_ratio);
    if (diagnose_cmd->parsed()) return cmd_diagnose(input, outdir, config, max_lag);
    if (fit_cmd->parsed()) return cmd_fit(input, order_text, out, config);
    if (detect_cmd->parsed()) return cmd_detect(input, model_path, out, config);
    if (bench_cmd->parsed()) return cmd_bench(input, outdir, methods, config);
    if (gen_cmd->parsed()) {
        return cmd_gen(gen_mode, customers, out, truth_dir, config.split_ratio, config.seed);
    }
    if (run_cmd->parsed() || inject_cmd->parsed()) {
        config.input_path = input;
        config.output_dir = outdir;
        config.order = parse_order(order_text);
        const PipelineResult result = run_pipeline(config, inject_cmd->parsed());
        std::cout << report_to_csv(result.report);
        return kExitOk;
    }
    if (report_cmd->parsed()) return cmd_report(outdir);
    return kExitUsage;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return dispatch(argc, argv);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const EstimationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitEstimation;
    } catch (const InvalidModelError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitEstimation;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    }
}
