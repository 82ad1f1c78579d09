#include "fraudts/datagen.hpp"

#include "fraudts/csv.hpp"
#include "fraudts/errors.hpp"
#include "fraudts/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace fraudts {

namespace {

std::string day_timestamp(Date date, std::int64_t second_of_day) {
    char buf[32];
    const std::int64_t hh = second_of_day / 3600;
    const std::int64_t mm = (second_of_day / 60) % 60;
    const std::int64_t ss = second_of_day % 60;
    std::snprintf(buf, sizeof(buf), "%sT%02lld:%02lld:%02lldZ", format_date(date).c_str(),
                  static_cast<long long>(hh), static_cast<long long>(mm),
                  static_cast<long long>(ss));
    return buf;
}

std::vector<std::int64_t> realize_counts(const CustomerProfile& profile, Rng& rng) {
    std::vector<std::int64_t> counts(profile.active_days, 0);
    if (profile.kind == CustomerProfile::Kind::ArimaCounts) {
        const auto sim =
            simulate(profile.base_model, profile.active_days, rng.next_u64());
        for (std::size_t i = 0; i < counts.size(); ++i) {
            counts[i] = std::max<std::int64_t>(0, std::llround(sim[i]));
        }
    } else {
        for (auto& c : counts) c = rng.poisson(profile.poisson_lambda);
    }
    return counts;
}

} // namespace

GeneratedCorpus generate_corpus(const std::vector<CustomerProfile>& profiles,
                                std::uint64_t seed) {
    GeneratedCorpus corpus;
    for (std::size_t idx = 0; idx < profiles.size(); ++idx) {
        const CustomerProfile& profile = profiles[idx];
        if (profile.active_days == 0) throw ConfigError("profile with zero active days");
        for (const auto& [day, count] : profile.fraud_days) {
            if (day >= profile.active_days) throw ConfigError("fraud day outside active window");
            if (count < 1) throw ConfigError("fraud day with non-positive count");
        }

        Rng rng(mix_seed(seed, idx));
        std::vector<std::int64_t> legit = realize_counts(profile, rng);
        std::vector<std::int64_t> fraud(profile.active_days, 0);
        for (const auto& [day, count] : profile.fraud_days) fraud[day] += count;

        // anchor the window so aggregation reproduces it
        if (legit.front() + fraud.front() == 0) legit.front() = 1;
        if (legit.back() + fraud.back() == 0) legit.back() = 1;

        DailyCountSeries truth;
        truth.customer_id = profile.customer_id;
        truth.start_date = profile.start_date;
        truth.total_counts.resize(profile.active_days);
        truth.fraud_counts = fraud;
        for (std::size_t day = 0; day < profile.active_days; ++day) {
            truth.total_counts[day] = legit[day] + fraud[day];
            const Date date = profile.start_date + static_cast<std::int64_t>(day);
            for (std::int64_t t = 0; t < truth.total_counts[day]; ++t) {
                TransactionRecord rec;
                rec.customer_id = profile.customer_id;
                rec.date = date;
                rec.timestamp = day_timestamp(date, rng.uniform_int(0, 86399));
                rec.amount = std::round(rng.uniform(1.0, 500.0) * 100.0) / 100.0;
                rec.label = t < fraud[day] ? 1 : 0;
                corpus.transactions.push_back(std::move(rec));
            }
        }
        corpus.truth.push_back(std::move(truth));
    }

    std::stable_sort(corpus.transactions.begin(), corpus.transactions.end(),
                     [](const TransactionRecord& a, const TransactionRecord& b) {
                         if (a.timestamp != b.timestamp) return a.timestamp < b.timestamp;
                         return a.customer_id < b.customer_id;
                     });
    return corpus;
}

void write_transactions_csv(const std::string& path,
                            const std::vector<TransactionRecord>& transactions) {
    CsvTable table;
    table.header = {"customer_id", "timestamp", "amount", "label"};
    table.rows.reserve(transactions.size());
    for (const auto& t : transactions) {
        table.rows.push_back(
            {t.customer_id, t.timestamp, format_fixed(t.amount, 2), std::to_string(t.label)});
    }
    write_csv(path, table);
}

namespace {

CustomerProfile ar1_profile(const std::string& id, std::size_t days, Rng& rng) {
    CustomerProfile profile;
    profile.customer_id = id;
    profile.active_days = days;
    const double phi = rng.uniform(0.3, 0.6);
    const double mean_count = rng.uniform(6.0, 10.0);
    profile.base_model.order = {1, 0, 0};
    profile.base_model.phi = {phi};
    profile.base_model.mu = mean_count;
    profile.base_model.intercept = mean_count * (1.0 - phi);
    profile.base_model.sigma2 = rng.uniform(0.4, 0.7);
    return profile;
}

void add_fraud_days(CustomerProfile& profile, std::size_t lo, std::size_t hi, std::size_t count,
                    Rng& rng) {
    std::vector<std::size_t> days;
    while (days.size() < count) {
        const auto day = static_cast<std::size_t>(rng.uniform_int(
            static_cast<std::int64_t>(lo), static_cast<std::int64_t>(hi) - 1));
        if (std::find(days.begin(), days.end(), day) == days.end()) days.push_back(day);
    }
    for (const std::size_t day : days) {
        profile.fraud_days.emplace_back(day, rng.uniform_int(1, 8));
    }
}

} // namespace

std::vector<CustomerProfile> synthetic_eligible_profiles(std::size_t count, double split_ratio,
                                                         std::uint64_t seed) {
    // day spans in the range seen on real per-customer windows
    static const std::size_t kSpans[] = {275, 277, 275, 266, 188, 235, 277, 273, 170};
    Rng rng(mix_seed(seed, 0xe1b));
    std::vector<CustomerProfile> profiles;
    char id[32];
    for (std::size_t i = 0; i < count; ++i) {
        std::snprintf(id, sizeof(id), "cust%02zu", i);
        const std::size_t days = kSpans[i % (sizeof(kSpans) / sizeof(kSpans[0]))];
        CustomerProfile profile = ar1_profile(id, days, rng);
        const auto train_len = static_cast<std::size_t>(split_ratio * static_cast<double>(days));
        add_fraud_days(profile, train_len, days, 1 + (rng.uniform01() < 0.3 ? 1 : 0), rng);
        profiles.push_back(std::move(profile));
    }
    return profiles;
}

std::vector<CustomerProfile> synthetic_mixed_profiles(double split_ratio, std::uint64_t seed) {
    std::vector<CustomerProfile> profiles = synthetic_eligible_profiles(9, split_ratio, seed);
    Rng rng(mix_seed(seed, 0x24));
    char id[32];
    for (std::size_t i = 9; i < 24; ++i) {
        std::snprintf(id, sizeof(id), "cust%02zu", i);
        const auto days = static_cast<std::size_t>(rng.uniform_int(170, 280));
        CustomerProfile profile = ar1_profile(id, days, rng);
        if (i < 17) {
            // fraud lands in the training window: rejected as "fraud in train"
            const auto train_len =
                static_cast<std::size_t>(split_ratio * static_cast<double>(days));
            add_fraud_days(profile, 0, train_len, 1, rng);
        }
        // i >= 17: no frauds at all, rejected as "no fraud in test"
        profiles.push_back(std::move(profile));
    }
    return profiles;
}

} // namespace fraudts
