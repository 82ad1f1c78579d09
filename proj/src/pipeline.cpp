#include "fraudts/pipeline.hpp"

#include "fraudts/csv.hpp"
#include "fraudts/errors.hpp"
#include "fraudts/rng.hpp"

#include <json.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>

namespace fraudts {

namespace {

AdfRegression regression_kind(const PipelineConfig& config) {
    return config.adf_trend ? AdfRegression::ConstantTrend : AdfRegression::Constant;
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write file: " + path.string());
    out << text;
}

} // namespace

std::size_t choose_differencing(const std::vector<double>& train, const PipelineConfig& config) {
    std::vector<double> working = train;
    for (std::size_t d = 0; d < 2; ++d) {
        const AdfResult adf = adf_test(working, std::nullopt, config.adf_significance,
                                       regression_kind(config));
        if (adf.stationary) return d;
        working = difference(working, 1);
    }
    return 2;
}

OrderSelection select_order(const std::vector<double>& train, std::size_t d,
                            const PipelineConfig& config) {
    const std::vector<double> w = difference(train, d);
    const std::size_t max_lag = std::min<std::size_t>(20, w.size() / 4);

    std::vector<std::pair<std::size_t, std::size_t>> candidates;
    try {
        candidates = suggest_orders(correlogram(w, max_lag));
    } catch (const Error&) {
        // identification failed (degenerate correlogram); keep the forced candidates
    }
    for (const auto forced : {std::pair<std::size_t, std::size_t>{1, 1},
                              std::pair<std::size_t, std::size_t>{1, 2}}) {
        if (std::find(candidates.begin(), candidates.end(), forced) == candidates.end()) {
            candidates.push_back(forced);
        }
    }

    OrderSelection selection;
    std::optional<std::size_t> best_passing, best_any;
    std::vector<ArimaModel> fitted(candidates.size());

    for (std::size_t i = 0; i < candidates.size(); ++i) {
        OrderAttempt attempt;
        attempt.order = {candidates[i].first, d, candidates[i].second};
        try {
            fitted[i] = fit(train, attempt.order);
            attempt.aic = fitted[i].aic;

            attempt.coefficients_significant = true;
            for (const auto& check : significance_check(fitted[i])) {
                if (check.name == "intercept") continue;
                if (!check.significant) attempt.coefficients_significant = false;
            }

            const std::size_t pq = attempt.order.p + attempt.order.q;
            const LjungBoxResult lb = ljung_box(fitted[i].train_residuals,
                                                std::max<std::size_t>(10, pq + 1), pq);
            attempt.ljung_box_pvalue = lb.p_value;

            const bool passes = attempt.coefficients_significant && lb.p_value > 0.05;
            if (passes && (!best_passing || attempt.aic < fitted[*best_passing].aic)) {
                best_passing = i;
            }
            if (!best_any || attempt.aic < fitted[*best_any].aic) best_any = i;
        } catch (const Error& e) {
            attempt.error = e.what();
        }
        selection.attempts.push_back(std::move(attempt));
    }

    if (!best_any) {
        throw EstimationError("no candidate order could be fitted to the series");
    }
    const std::size_t chosen = best_passing ? *best_passing : *best_any;
    selection.fallback_used = !best_passing;
    selection.model = std::move(fitted[chosen]);
    selection.attempts[chosen].accepted = true;
    return selection;
}

std::vector<ForecastPoint> forecast_with_refit(const ArimaModel& model, const SplitSeries& split,
                                               const PipelineConfig& config) {
    const std::vector<double> train = split.train_values();
    const std::vector<double> test = split.test_values();
    if (config.refit_every == 0) return rolling_forecast(model, train, test);

    std::vector<ForecastPoint> points;
    std::vector<double> history = train;
    ArimaModel current = model;
    std::size_t done = 0;
    while (done < test.size()) {
        const std::size_t chunk = std::min(config.refit_every, test.size() - done);
        std::vector<double> block(test.begin() + static_cast<std::ptrdiff_t>(done),
                                  test.begin() + static_cast<std::ptrdiff_t>(done + chunk));
        for (ForecastPoint pt : rolling_forecast(current, history, block)) {
            pt.day_index = static_cast<std::int64_t>(train.size() + done) +
                           (pt.day_index - static_cast<std::int64_t>(history.size()));
            points.push_back(pt);
        }
        history.insert(history.end(), block.begin(), block.end());
        done += chunk;
        if (done < test.size()) {
            try {
                current = fit(history, current.order);
            } catch (const Error&) {
                // keep the previous coefficients when a refit fails
            }
        }
    }
    return points;
}

SeriesRunResult run_series(const SplitSeries& split, const PipelineConfig& config) {
    SeriesRunResult result;
    result.customer_id = split.series.customer_id;

    const std::vector<double> train = split.train_values();
    result.adf = adf_test(train, std::nullopt, config.adf_significance, regression_kind(config));

    std::size_t d;
    if (config.order) {
        d = config.order->d;
    } else {
        d = choose_differencing(train, config);
    }

    const std::vector<double> w = difference(train, d);
    result.gram = correlogram(w, std::min<std::size_t>(20, w.size() / 4));

    if (config.order) {
        OrderAttempt attempt;
        attempt.order = *config.order;
        result.selection.model = fit(train, *config.order);
        attempt.aic = result.selection.model.aic;
        attempt.accepted = true;
        result.selection.attempts.push_back(attempt);
    } else {
        result.selection = select_order(train, d, config);
    }

    const ArimaModel& model = result.selection.model;
    const std::size_t pq = model.order.p + model.order.q;
    try {
        result.residual_ljung_box =
            ljung_box(model.train_residuals, std::max<std::size_t>(10, pq + 1), pq);
    } catch (const Error&) {
        result.residual_ljung_box = std::nullopt;
    }

    result.forecasts = forecast_with_refit(model, split, config);

    DetectorConfig det;
    det.threshold = config.z_threshold;
    det.two_sided = config.two_sided;
    result.outcomes = detect(result.forecasts, model.train_residuals, split.test_truth(), det);
    return result;
}

std::vector<DetectorFactory> make_detectors(const PipelineConfig& config) {
    std::vector<DetectorFactory> detectors;
    for (const std::string& method : config.methods) {
        DetectorFactory factory;
        factory.name = method;
        if (method == "arima") {
            factory.bind = [config](const SplitSeries& base) -> SeriesRunner {
                // fit once on the unmodified training window
                const std::vector<double> train = base.train_values();
                ArimaModel model;
                if (config.order) {
                    model = fit(train, *config.order);
                } else {
                    model = select_order(train, choose_differencing(train, config), config).model;
                }
                DetectorConfig det;
                det.threshold = config.z_threshold;
                det.two_sided = config.two_sided;
                return [config, model, det](const SplitSeries& variant, std::uint64_t) {
                    const auto forecasts = forecast_with_refit(model, variant, config);
                    const auto outcomes = detect(forecasts, model.train_residuals, det);
                    std::vector<bool> flags;
                    flags.reserve(outcomes.size());
                    for (const auto& o : outcomes) flags.push_back(o.flagged);
                    return flags;
                };
            };
        } else if (method == "boxplot") {
            factory.bind = [](const SplitSeries&) -> SeriesRunner {
                return [](const SplitSeries& variant, std::uint64_t) {
                    return boxplot_detect(variant.series.totals_as_double(), variant.train_len)
                        .flags;
                };
            };
        } else if (method == "lof") {
            factory.bind = [config](const SplitSeries&) -> SeriesRunner {
                return [config](const SplitSeries& variant, std::uint64_t) {
                    const auto values = variant.series.totals_as_double();
                    const std::size_t k = std::min(config.lof_k, values.size() - 1);
                    return lof_detect(values, variant.train_len, k, config.lof_threshold).flags;
                };
            };
        } else if (method == "iforest") {
            factory.bind = [config](const SplitSeries&) -> SeriesRunner {
                return [config](const SplitSeries& variant, std::uint64_t seed) {
                    return iforest_detect(variant.train_values(), variant.test_values(),
                                          config.iforest_trees, config.iforest_subsample, seed)
                        .flags;
                };
            };
        } else if (method == "kmeans") {
            factory.bind = [config](const SplitSeries&) -> SeriesRunner {
                return [config](const SplitSeries& variant, std::uint64_t seed) {
                    return kmeans_detect(variant.series.totals_as_double(), variant.train_len,
                                         seed, config.kmeans_restarts)
                        .flags;
                };
            };
        } else {
            throw ConfigError("unknown detection method: " + method);
        }
        detectors.push_back(std::move(factory));
    }
    return detectors;
}

void write_correlogram_csv(const std::string& path, const Correlogram& gram) {
    CsvTable table;
    table.header = {"lag", "acf", "pacf", "band"};
    for (std::size_t k = 0; k < gram.acf.size(); ++k) {
        table.rows.push_back({std::to_string(k + 1), format_double(gram.acf[k]),
                              format_double(gram.pacf[k]), format_double(gram.confidence_band)});
    }
    write_csv(path, table);
}

void write_detection_csv(const std::string& path, const SplitSeries& split,
                         const std::vector<ForecastPoint>& forecasts,
                         const std::vector<DetectionOutcome>& outcomes) {
    if (forecasts.size() != outcomes.size()) throw ShapeError("forecast/outcome length mismatch");
    CsvTable table;
    table.header = {"date", "actual", "predicted", "error", "zscore", "flagged", "truth"};
    for (std::size_t i = 0; i < forecasts.size(); ++i) {
        const Date date =
            split.series.start_date + static_cast<std::int64_t>(split.train_len + i);
        table.rows.push_back({format_date(date), format_double(forecasts[i].actual),
                              format_double(forecasts[i].predicted),
                              format_double(forecasts[i].error),
                              format_double(outcomes[i].z_score),
                              outcomes[i].flagged ? "1" : "0",
                              outcomes[i].actual_fraud_day ? "1" : "0"});
    }
    write_csv(path, table);
}

void write_baseline_csv(const std::string& path, const SplitSeries& split,
                        const BaselineFlagSet& flags) {
    const auto truth = split.test_truth();
    if (flags.flags.size() != truth.size()) throw ShapeError("baseline flag length mismatch");
    CsvTable table;
    table.header = {"date", "actual", "predicted", "error", "zscore", "flagged", "truth"};
    for (std::size_t i = 0; i < flags.flags.size(); ++i) {
        const Date date =
            split.series.start_date + static_cast<std::int64_t>(split.train_len + i);
        table.rows.push_back({format_date(date),
                              std::to_string(split.series.total_counts[split.train_len + i]),
                              "", "", format_double(flags.scores[i]),
                              flags.flags[i] ? "1" : "0", truth[i] ? "1" : "0"});
    }
    write_csv(path, table);
}

std::string series_diagnostics_json(const SeriesRunResult& result) {
    nlohmann::json j;
    j["customer_id"] = result.customer_id;
    j["adf"] = {{"t_statistic", result.adf.t_statistic},
                {"p_value", result.adf.p_value},
                {"lags_used", result.adf.lags_used},
                {"stationary", result.adf.stationary}};
    const auto& model = result.selection.model;
    j["order"] = {{"p", model.order.p}, {"d", model.order.d}, {"q", model.order.q}};
    j["fallback_used"] = result.selection.fallback_used;
    nlohmann::json attempts = nlohmann::json::array();
    for (const auto& a : result.selection.attempts) {
        nlohmann::json ja;
        ja["order"] = {{"p", a.order.p}, {"d", a.order.d}, {"q", a.order.q}};
        if (a.error.empty()) {
            ja["aic"] = a.aic;
            ja["coefficients_significant"] = a.coefficients_significant;
            ja["ljung_box_pvalue"] = a.ljung_box_pvalue;
            ja["accepted"] = a.accepted;
        } else {
            ja["error"] = a.error;
        }
        attempts.push_back(ja);
    }
    j["attempts"] = attempts;
    if (result.residual_ljung_box) {
        j["residual_ljung_box"] = {{"q_statistic", result.residual_ljung_box->q_statistic},
                                   {"p_value", result.residual_ljung_box->p_value},
                                   {"lags", result.residual_ljung_box->lags},
                                   {"dof", result.residual_ljung_box->dof}};
    }
    return j.dump(2);
}

PipelineResult run_pipeline(const PipelineConfig& config, bool with_injection) {
    namespace fs = std::filesystem;
    const fs::path out_dir(config.output_dir);
    fs::create_directories(out_dir / "counts");
    fs::create_directories(out_dir / "series");

    const auto transactions = read_transactions_csv(config.input_path);
    if (transactions.empty()) throw NoDataError("input contains no transactions");
    const auto all_series = aggregate_all(transactions);

    PipelineResult result;
    std::vector<SplitSeries> splits;
    nlohmann::json eligibility_report = nlohmann::json::array();
    for (const auto& series : all_series) {
        write_counts_csv((out_dir / "counts" / (series.customer_id + ".csv")).string(), series);
        SplitSeries s = split(series, config.split_ratio);
        const EligibilityResult e = eligibility(s);
        nlohmann::json je;
        je["customer_id"] = series.customer_id;
        je["days"] = series.size();
        je["train_days"] = s.train_len;
        je["test_days"] = s.test_len;
        je["eligible"] = e.eligible;
        if (!e.eligible) je["reason"] = e.reason;
        eligibility_report.push_back(je);
        if (e.eligible) {
            result.eligible.push_back(series.customer_id);
        } else {
            result.rejected.emplace_back(series.customer_id, e.reason);
        }
        splits.push_back(std::move(s));
    }
    write_text_file(out_dir / "eligibility.json", eligibility_report.dump(2));

    if (result.eligible.empty() && !with_injection) {
        std::string msg = "no eligible series in the corpus:";
        for (const auto& [id, reason] : result.rejected) msg += "\n  " + id + ": " + reason;
        throw NoDataError(msg);
    }

    // per-series artifacts for the eligible series, in parallel
    struct SeriesArtifacts {
        SeriesRunResult run;
        std::vector<BaselineFlagSet> baselines;
    };
    std::vector<std::future<SeriesArtifacts>> futures;
    std::vector<const SplitSeries*> eligible_splits;
    for (std::size_t idx = 0; idx < splits.size(); ++idx) {
        const SplitSeries& s = splits[idx];
        if (!eligibility(s).eligible) continue;
        eligible_splits.push_back(&s);
        const std::uint64_t series_seed = mix_seed(config.seed, idx);
        futures.push_back(std::async(std::launch::async, [&s, series_seed, &config]() {
            SeriesArtifacts art;
            art.run = run_series(s, config);
            const auto values = s.series.totals_as_double();
            for (const std::string& method : config.methods) {
                if (method == "boxplot") {
                    art.baselines.push_back(boxplot_detect(values, s.train_len));
                } else if (method == "lof") {
                    const std::size_t k = std::min(config.lof_k, values.size() - 1);
                    art.baselines.push_back(
                        lof_detect(values, s.train_len, k, config.lof_threshold));
                } else if (method == "iforest") {
                    art.baselines.push_back(iforest_detect(s.train_values(), s.test_values(),
                                                           config.iforest_trees,
                                                           config.iforest_subsample,
                                                           series_seed));
                } else if (method == "kmeans") {
                    art.baselines.push_back(
                        kmeans_detect(values, s.train_len, series_seed,
                                      config.kmeans_restarts));
                }
            }
            return art;
        }));
    }
    for (std::size_t i = 0; i < futures.size(); ++i) {
        const SeriesArtifacts art = futures[i].get();
        const SplitSeries& s = *eligible_splits[i];
        const fs::path series_dir = out_dir / "series" / s.series.customer_id;
        fs::create_directories(series_dir);
        write_text_file(series_dir / "model.json", model_to_json(art.run.selection.model));
        write_text_file(series_dir / "diagnostics.json", series_diagnostics_json(art.run));
        write_correlogram_csv((series_dir / "correlogram.csv").string(), art.run.gram);
        write_detection_csv((series_dir / "detect.csv").string(), s, art.run.forecasts,
                            art.run.outcomes);
        for (const auto& b : art.baselines) {
            write_baseline_csv((series_dir / ("bench_" + b.method + ".csv")).string(), s, b);
        }
    }

    const std::optional<InjectionSpec> spec =
        with_injection ? std::optional<InjectionSpec>([&] {
            InjectionSpec is = config.injection;
            is.seed = config.seed;
            return is;
        }())
                       : std::nullopt;
    result.report = run_experiment(splits, make_detectors(config), spec);
    write_text_file(out_dir / "report.json", report_to_json(result.report));
    write_text_file(out_dir / "report.csv", report_to_csv(result.report));
    for (const auto& w : result.report.warnings) std::cerr << "warning: " << w << "\n";
    return result;
}

} // namespace fraudts
