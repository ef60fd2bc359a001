#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "surgecast/date.hpp"
#include "surgecast/tensor.hpp"

namespace surgecast {

// One calendar day of the raw daily-statistics feed. Absent cells simply
// have no entry in `values`.
struct DailyRecord {
    Date date;
    std::map<std::string, double> values;
};

// Gap-free chronological feature matrix: one row per consecutive day.
struct FeatureSeries {
    Date start_date;
    std::vector<std::string> feature_names;
    Tensor2 rows; // T x F
    std::map<std::string, int> imputation_log; // fills per column

    int days() const { return static_cast<int>(rows.rows()); }
    Date end_date() const { return start_date + (days() - 1); }
    bool covers(Date first, Date last) const {
        return first >= start_date && last <= end_date();
    }
    int row_index(Date d) const { return d - start_date; }
    int column_index(const std::string& name) const; // throws SchemaError when absent
    double at(Date d, int col) const { return rows(static_cast<std::size_t>(row_index(d)), col); }
};

// Parses the comma-delimited daily feed: first row is the header, one row
// per day, empty string = missing, ISO dates. `required_columns` beyond the
// date column are verified to exist in the header. Output is sorted by
// date. Throws ParseError (bad date or number, naming the row),
// ConflictError (duplicate date) or SchemaError (missing column).
std::vector<DailyRecord> parse_daily_csv(std::string_view raw_text,
                                         const std::string& date_column = "date",
                                         const std::vector<std::string>& required_columns = {});

// Column names present in any record, in first-seen order.
std::vector<std::string> observed_columns(const std::vector<DailyRecord>& records);

// Builds the dense series over [start_date, end_date]: missing days or
// cells are forward-filled per column, then any still-missing leading
// values become 0. Throws RangeError when no record falls inside the range
// and SchemaError when a feature name is never observed.
FeatureSeries build_feature_series(const std::vector<DailyRecord>& records,
                                   const std::vector<std::string>& feature_names,
                                   Date start_date, Date end_date);

// CSV rendering of a series (date column first); parse_daily_csv +
// build_feature_series on the output reproduce the matrix exactly.
std::string write_series_csv(const FeatureSeries& series, const std::string& date_column = "date");

} // namespace surgecast
