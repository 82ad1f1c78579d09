#include "fraudts/eval.hpp"

#include "fraudts/csv.hpp"
#include "fraudts/errors.hpp"
#include "fraudts/rng.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <future>

namespace fraudts {

ConfusionCounts confusion(const std::vector<bool>& flags, const std::vector<bool>& truth) {
    if (flags.size() != truth.size()) {
        throw ShapeError("confusion: flags and truth lengths differ");
    }
    ConfusionCounts c;
    for (std::size_t i = 0; i < flags.size(); ++i) {
        if (flags[i] && truth[i]) ++c.tp;
        else if (flags[i] && !truth[i]) ++c.fp;
        else if (!flags[i] && truth[i]) ++c.fn;
        else ++c.tn;
    }
    return c;
}

MetricValues metrics(const ConfusionCounts& c) {
    MetricValues m;
    if (c.tp + c.fp > 0) {
        m.precision = static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp);
    }
    if (c.tp + c.fn > 0) {
        m.recall = static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn);
    }
    if (m.precision && m.recall && (*m.precision + *m.recall) > 0.0) {
        m.f_measure = 2.0 * (*m.precision) * (*m.recall) / (*m.precision + *m.recall);
    }
    return m;
}

std::optional<double> mean_defined(const std::vector<std::optional<double>>& values) {
    double sum = 0.0;
    std::size_t count = 0;
    for (const auto& v : values) {
        if (v) {
            sum += *v;
            ++count;
        }
    }
    if (count == 0) return std::nullopt;
    return sum / static_cast<double>(count);
}

SplitSeries inject_frauds(const SplitSeries& split, const InjectionSpec& spec) {
    if (split.test_len == 0) throw NoDataError("cannot inject into an empty test range");
    if (spec.count_min < 1 || spec.count_max < spec.count_min) {
        throw ConfigError("injection count range must satisfy 1 <= min <= max");
    }
    Rng rng(spec.seed);
    const auto day_offset = static_cast<std::size_t>(
        rng.uniform_int(0, static_cast<std::int64_t>(split.test_len) - 1));
    const std::int64_t u = rng.uniform_int(spec.count_min, spec.count_max);

    SplitSeries out = split;
    const std::size_t day = out.train_len + day_offset;
    out.series.total_counts[day] += u;
    out.series.fraud_counts[day] += u;
    return out;
}

namespace {

struct SeriesOutcome {
    std::string series_id;
    std::map<std::string, MetricValues> by_method; ///< per-series averages
    std::vector<std::string> warnings;
};

MetricValues average_reps(const std::vector<MetricValues>& reps) {
    std::vector<std::optional<double>> p, r, f;
    for (const auto& m : reps) {
        p.push_back(m.precision);
        r.push_back(m.recall);
        f.push_back(m.f_measure);
    }
    MetricValues out;
    out.precision = mean_defined(p);
    out.recall = mean_defined(r);
    out.f_measure = mean_defined(f);
    return out;
}

SeriesOutcome evaluate_series(const SplitSeries& base, bool needs_injection,
                              const std::vector<DetectorFactory>& detectors,
                              const std::optional<InjectionSpec>& spec,
                              std::uint64_t series_seed) {
    SeriesOutcome outcome;
    outcome.series_id = base.series.customer_id;

    for (const auto& factory : detectors) {
        SeriesRunner runner;
        try {
            runner = factory.bind(base);
        } catch (const Error& e) {
            outcome.warnings.push_back(factory.name + " failed on series " +
                                       base.series.customer_id + ": " + e.what());
            continue;
        }

        try {
            if (!needs_injection) {
                const auto flags = runner(base, series_seed);
                outcome.by_method[factory.name] = metrics(confusion(flags, base.test_truth()));
            } else {
                std::vector<MetricValues> reps;
                reps.reserve(spec->repetitions);
                for (std::size_t rep = 0; rep < spec->repetitions; ++rep) {
                    const std::uint64_t rep_seed = series_seed ^ static_cast<std::uint64_t>(rep);
                    InjectionSpec one = *spec;
                    one.seed = rep_seed;
                    const SplitSeries injected = inject_frauds(base, one);
                    const auto flags = runner(injected, rep_seed);
                    reps.push_back(metrics(confusion(flags, injected.test_truth())));
                }
                outcome.by_method[factory.name] = average_reps(reps);
            }
        } catch (const Error& e) {
            outcome.warnings.push_back(factory.name + " failed on series " +
                                       base.series.customer_id + ": " + e.what());
        }
    }
    return outcome;
}

} // namespace

ComparisonReport run_experiment(const std::vector<SplitSeries>& series_set,
                                const std::vector<DetectorFactory>& detectors,
                                const std::optional<InjectionSpec>& spec) {
    ComparisonReport report;
    for (const auto& d : detectors) report.methods.push_back(d.name);

    const std::uint64_t master = spec ? spec->seed : 0;
    std::vector<std::future<SeriesOutcome>> futures;
    std::vector<std::string> skipped;

    for (std::size_t idx = 0; idx < series_set.size(); ++idx) {
        const SplitSeries& base = series_set[idx];
        const bool eligible = eligibility(base).eligible;
        if (!eligible && !spec) {
            skipped.push_back(base.series.customer_id + " skipped: " +
                              eligibility(base).reason);
            continue;
        }
        const bool needs_injection = !eligible;
        const std::uint64_t series_seed = mix_seed(master, idx);
        futures.push_back(std::async(std::launch::async, evaluate_series, std::cref(base),
                                     needs_injection, std::cref(detectors), std::cref(spec),
                                     series_seed));
    }

    std::vector<SeriesOutcome> outcomes;
    outcomes.reserve(futures.size());
    for (auto& f : futures) outcomes.push_back(f.get());

    report.warnings = std::move(skipped);
    for (const auto& o : outcomes) {
        for (const auto& w : o.warnings) report.warnings.push_back(w);
    }

    for (const auto& method : report.methods) {
        MetricsReport mr;
        std::vector<std::optional<double>> p, r, f;
        for (const auto& o : outcomes) {
            const auto it = o.by_method.find(method);
            if (it == o.by_method.end()) continue;
            mr.per_series[o.series_id] = it->second;
            p.push_back(it->second.precision);
            r.push_back(it->second.recall);
            f.push_back(it->second.f_measure);
        }
        mr.aggregate.precision = mean_defined(p);
        mr.aggregate.recall = mean_defined(r);
        mr.aggregate.f_measure = mean_defined(f);
        report.per_method[method] = std::move(mr);
    }
    return report;
}

namespace {

nlohmann::json metric_json(const MetricValues& m) {
    nlohmann::json j;
    j["precision"] = m.precision ? nlohmann::json(*m.precision) : nlohmann::json(nullptr);
    j["recall"] = m.recall ? nlohmann::json(*m.recall) : nlohmann::json(nullptr);
    j["f_measure"] = m.f_measure ? nlohmann::json(*m.f_measure) : nlohmann::json(nullptr);
    return j;
}

std::string percent_or_na(const std::optional<double>& v) {
    if (!v) return "n/a";
    return format_fixed(*v * 100.0, 2) + "%";
}

} // namespace

std::string report_to_json(const ComparisonReport& report) {
    nlohmann::json j;
    j["methods"] = report.methods;
    nlohmann::json body = nlohmann::json::object();
    for (const auto& method : report.methods) {
        const auto it = report.per_method.find(method);
        if (it == report.per_method.end()) continue;
        nlohmann::json m;
        m["aggregate"] = metric_json(it->second.aggregate);
        nlohmann::json per = nlohmann::json::object();
        for (const auto& [id, values] : it->second.per_series) per[id] = metric_json(values);
        m["per_series"] = per;
        body[method] = m;
    }
    j["results"] = body;
    j["warnings"] = report.warnings;
    return j.dump(2);
}

std::string report_to_csv(const ComparisonReport& report) {
    std::string out = "METRICS";
    for (const auto& method : report.methods) out += "," + method;
    out += "\n";
    const std::vector<std::pair<std::string, std::optional<double> MetricValues::*>> rows = {
        {"Precision", &MetricValues::precision},
        {"Recall", &MetricValues::recall},
        {"F-Measure", &MetricValues::f_measure},
    };
    for (const auto& [label, member] : rows) {
        out += label;
        for (const auto& method : report.methods) {
            const auto it = report.per_method.find(method);
            out += ",";
            out += it == report.per_method.end() ? "n/a"
                                                 : percent_or_na(it->second.aggregate.*member);
        }
        out += "\n";
    }
    return out;
}

} // namespace fraudts
