#pragma once

#include "fraudts/arima.hpp"
#include "fraudts/ingest.hpp"

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace fraudts {

/// Synthetic customer: legitimate daily counts drawn from a count model,
/// frauds injected as extra transactions on chosen days.
struct CustomerProfile {
    enum class Kind {
        ArimaCounts,  ///< max(0, round(.)) of an ARIMA simulation
        PoissonBurst, ///< i.i.d. Poisson counts (model-mismatch robustness)
    };

    std::string customer_id;
    Date start_date{17000}; // 2016-07-18
    Kind kind = Kind::ArimaCounts;
    ArimaModel base_model;
    double poisson_lambda = 5.0;
    std::size_t active_days = 0;
    /// (day index, fraud transaction count); indices must lie inside active_days.
    std::vector<std::pair<std::size_t, std::int64_t>> fraud_days;
};

struct GeneratedCorpus {
    std::vector<TransactionRecord> transactions; ///< sorted by timestamp, then customer
    std::vector<DailyCountSeries> truth;         ///< realised counts, one per profile
};

/// Expand profiles into individual timestamped transactions. Counts on the
/// first and last active day are raised to at least one so the active window
/// survives re-aggregation. Deterministic under seed.
GeneratedCorpus generate_corpus(const std::vector<CustomerProfile>& profiles, std::uint64_t seed);

void write_transactions_csv(const std::string& path,
                            const std::vector<TransactionRecord>& transactions);

/// `count` eligible customers: AR(1) legitimate behaviour, one or two fraud
/// days placed inside the test window, burst sizes uniform in 1..8.
std::vector<CustomerProfile> synthetic_eligible_profiles(std::size_t count, double split_ratio,
                                                         std::uint64_t seed);

/// 24 customers of which exactly 9 are eligible: 9 with test-window frauds,
/// 8 with train-window frauds only, 7 with no frauds at all.
std::vector<CustomerProfile> synthetic_mixed_profiles(double split_ratio, std::uint64_t seed);

} // namespace fraudts
