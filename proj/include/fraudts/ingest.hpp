#pragma once

#include "fraudts/dates.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace fraudts {

/// One raw card transaction.
struct TransactionRecord {
    std::string customer_id;
    Date date;            ///< UTC calendar date of the timestamp
    std::string timestamp; ///< original ISO-8601 text, kept for re-emission
    double amount = 0.0;   ///< informational only
    int label = 0;         ///< 0 legitimate, 1 fraud
};

/// Per-customer daily transaction counts over a gap-free calendar range.
/// Day i is start_date + i; days without transactions carry count 0.
struct DailyCountSeries {
    std::string customer_id;
    Date start_date;
    std::vector<std::int64_t> total_counts;
    std::vector<std::int64_t> fraud_counts;

    std::size_t size() const { return total_counts.size(); }
    std::vector<double> totals_as_double() const;
};

/// Chronological train/test split of a series.
struct SplitSeries {
    DailyCountSeries series;
    std::size_t train_len = 0;
    std::size_t test_len = 0;
    double ratio = 0.0;

    std::vector<double> train_values() const;
    std::vector<double> test_values() const;
    std::int64_t train_fraud_total() const;
    std::int64_t test_fraud_days() const;
    /// Ground truth per test day: fraud_counts > 0.
    std::vector<bool> test_truth() const;
};

struct EligibilityResult {
    bool eligible = false;
    std::string reason; ///< empty when eligible; "fraud in train" / "no fraud in test"
};

/// Parse a transactions CSV with header customer_id,timestamp,amount,label.
std::vector<TransactionRecord> read_transactions_csv(const std::string& path);
std::vector<TransactionRecord> parse_transactions(const std::string& csv_text);

/// Daily counts for one customer, spanning their first to last transaction.
/// Throws NoDataError when the customer has no transactions.
DailyCountSeries aggregate(const std::vector<TransactionRecord>& transactions,
                           const std::string& customer_id);

/// Aggregate every customer present in the input, sorted by customer id.
std::vector<DailyCountSeries> aggregate_all(const std::vector<TransactionRecord>& transactions);

/// Chronological split: first floor(ratio * n) days train, rest test.
SplitSeries split(const DailyCountSeries& series, double ratio);

/// Paper filter: eligible iff the train window has no frauds and the test
/// window has at least one fraud day.
EligibilityResult eligibility(const SplitSeries& split);

/// Write a per-customer daily-count CSV with header date,total,fraud.
void write_counts_csv(const std::string& path, const DailyCountSeries& series);
DailyCountSeries read_counts_csv(const std::string& path, const std::string& customer_id = "");

} // namespace fraudts
