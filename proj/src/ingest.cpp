#include "fraudts/ingest.hpp"

#include "fraudts/csv.hpp"
#include "fraudts/errors.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

namespace fraudts {

std::vector<double> DailyCountSeries::totals_as_double() const {
    return std::vector<double>(total_counts.begin(), total_counts.end());
}

std::vector<double> SplitSeries::train_values() const {
    auto all = series.totals_as_double();
    return std::vector<double>(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(train_len));
}

std::vector<double> SplitSeries::test_values() const {
    auto all = series.totals_as_double();
    return std::vector<double>(all.begin() + static_cast<std::ptrdiff_t>(train_len), all.end());
}

std::int64_t SplitSeries::train_fraud_total() const {
    return std::accumulate(series.fraud_counts.begin(),
                           series.fraud_counts.begin() + static_cast<std::ptrdiff_t>(train_len),
                           std::int64_t{0});
}

std::int64_t SplitSeries::test_fraud_days() const {
    std::int64_t days = 0;
    for (std::size_t i = train_len; i < series.size(); ++i) {
        if (series.fraud_counts[i] > 0) ++days;
    }
    return days;
}

std::vector<bool> SplitSeries::test_truth() const {
    std::vector<bool> truth(test_len, false);
    for (std::size_t i = 0; i < test_len; ++i) {
        truth[i] = series.fraud_counts[train_len + i] > 0;
    }
    return truth;
}

std::vector<TransactionRecord> parse_transactions(const std::string& csv_text) {
    const CsvTable table = parse_csv(csv_text);
    const std::size_t id_col = table.column("customer_id");
    const std::size_t ts_col = table.column("timestamp");
    const std::size_t amount_col = table.column("amount");
    const std::size_t label_col = table.column("label");

    std::vector<TransactionRecord> records;
    records.reserve(table.rows.size());
    for (const auto& row : table.rows) {
        TransactionRecord rec;
        rec.customer_id = row[id_col];
        rec.timestamp = row[ts_col];
        rec.date = parse_timestamp_date(rec.timestamp);
        rec.amount = std::strtod(row[amount_col].c_str(), nullptr);
        const std::string& label = row[label_col];
        if (label == "0") {
            rec.label = 0;
        } else if (label == "1") {
            rec.label = 1;
        } else {
            throw DataFormatError("label must be 0 or 1, got: " + label);
        }
        records.push_back(std::move(rec));
    }
    return records;
}

std::vector<TransactionRecord> read_transactions_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw NoDataError("cannot open file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_transactions(buf.str());
}

DailyCountSeries aggregate(const std::vector<TransactionRecord>& transactions,
                           const std::string& customer_id) {
    Date first{0}, last{0};
    bool any = false;
    for (const auto& t : transactions) {
        if (t.customer_id != customer_id) continue;
        if (!any || t.date < first) first = t.date;
        if (!any || last < t.date) last = t.date;
        any = true;
    }
    if (!any) throw NoDataError("no transactions for customer: " + customer_id);

    const std::size_t n = static_cast<std::size_t>(last - first) + 1;
    DailyCountSeries series;
    series.customer_id = customer_id;
    series.start_date = first;
    series.total_counts.assign(n, 0);
    series.fraud_counts.assign(n, 0);
    for (const auto& t : transactions) {
        if (t.customer_id != customer_id) continue;
        const auto i = static_cast<std::size_t>(t.date - first);
        ++series.total_counts[i];
        if (t.label == 1) ++series.fraud_counts[i];
    }
    return series;
}

std::vector<DailyCountSeries> aggregate_all(const std::vector<TransactionRecord>& transactions) {
    std::map<std::string, bool> ids;
    for (const auto& t : transactions) ids[t.customer_id] = true;
    std::vector<DailyCountSeries> out;
    out.reserve(ids.size());
    for (const auto& [id, _] : ids) out.push_back(aggregate(transactions, id));
    return out;
}

SplitSeries split(const DailyCountSeries& series, double ratio) {
    if (!(ratio > 0.0 && ratio < 1.0)) {
        throw ConfigError("split ratio must be in (0,1), got " + std::to_string(ratio));
    }
    if (series.size() == 0) throw NoDataError("cannot split an empty series");
    SplitSeries s;
    s.series = series;
    s.ratio = ratio;
    s.train_len = static_cast<std::size_t>(ratio * static_cast<double>(series.size()));
    s.test_len = series.size() - s.train_len;
    return s;
}

EligibilityResult eligibility(const SplitSeries& split) {
    if (split.train_fraud_total() > 0) return {false, "fraud in train"};
    if (split.test_fraud_days() == 0) return {false, "no fraud in test"};
    return {true, ""};
}

void write_counts_csv(const std::string& path, const DailyCountSeries& series) {
    CsvTable table;
    table.header = {"date", "total", "fraud"};
    table.rows.reserve(series.size());
    for (std::size_t i = 0; i < series.size(); ++i) {
        table.rows.push_back({format_date(series.start_date + static_cast<std::int64_t>(i)),
                              std::to_string(series.total_counts[i]),
                              std::to_string(series.fraud_counts[i])});
    }
    write_csv(path, table);
}

DailyCountSeries read_counts_csv(const std::string& path, const std::string& customer_id) {
    const CsvTable table = read_csv(path);
    const std::size_t date_col = table.column("date");
    const std::size_t total_col = table.column("total");
    const std::size_t fraud_col = table.column("fraud");
    if (table.rows.empty()) throw NoDataError("counts CSV has no rows: " + path);

    DailyCountSeries series;
    series.customer_id = customer_id;
    series.start_date = parse_date(table.rows.front()[date_col]);
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const auto& row = table.rows[i];
        const Date d = parse_date(row[date_col]);
        if (d - series.start_date != static_cast<std::int64_t>(i)) {
            throw DataFormatError("counts CSV days are not consecutive at row " +
                                  std::to_string(i + 2));
        }
        const std::int64_t total = std::strtoll(row[total_col].c_str(), nullptr, 10);
        const std::int64_t fraud = std::strtoll(row[fraud_col].c_str(), nullptr, 10);
        if (total < 0 || fraud < 0 || fraud > total) {
            throw DataFormatError("invalid counts at row " + std::to_string(i + 2));
        }
        series.total_counts.push_back(total);
        series.fraud_counts.push_back(fraud);
    }
    return series;
}

} // namespace fraudts
