#include "surgecast/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <set>

#include "surgecast/error.hpp"

namespace surgecast {
namespace {

std::vector<std::string_view> split_lines(std::string_view text) {
    std::vector<std::string_view> lines;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t nl = text.find('\n', pos);
        std::string_view line = nl == std::string_view::npos
                                    ? text.substr(pos)
                                    : text.substr(pos, nl - pos);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        lines.push_back(line);
        if (nl == std::string_view::npos) break;
        pos = nl + 1;
    }
    while (!lines.empty() && lines.back().empty()) lines.pop_back();
    return lines;
}

std::vector<std::string> split_fields(std::string_view line) {
    std::vector<std::string> fields;
    std::size_t pos = 0;
    while (true) {
        std::size_t comma = line.find(',', pos);
        std::string_view cell = comma == std::string_view::npos
                                    ? line.substr(pos)
                                    : line.substr(pos, comma - pos);
        while (!cell.empty() && (cell.front() == ' ' || cell.front() == '"')) cell.remove_prefix(1);
        while (!cell.empty() && (cell.back() == ' ' || cell.back() == '"')) cell.remove_suffix(1);
        fields.emplace_back(cell);
        if (comma == std::string_view::npos) break;
        pos = comma + 1;
    }
    return fields;
}

std::optional<double> parse_number(const std::string& cell) {
    if (cell.empty()) return std::nullopt;
    const char* begin = cell.c_str();
    char* end = nullptr;
    double v = std::strtod(begin, &end);
    if (end != begin + cell.size() || !std::isfinite(v)) {
        throw ParseError("non-numeric cell value '" + cell + "'");
    }
    return v;
}

} // namespace

std::vector<DailyRecord> parse_daily_csv(std::string_view raw_text,
                                         const std::string& date_column,
                                         const std::vector<std::string>& required_columns) {
    auto lines = split_lines(raw_text);
    if (lines.empty()) {
        throw SchemaError("empty input: missing header row");
    }
    std::vector<std::string> header = split_fields(lines[0]);
    std::size_t date_idx = header.size();
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == date_column) {
            date_idx = i;
            break;
        }
    }
    if (date_idx == header.size()) {
        throw SchemaError("date column '" + date_column + "' not found in header");
    }
    for (const std::string& col : required_columns) {
        if (std::find(header.begin(), header.end(), col) == header.end()) {
            throw SchemaError("required column '" + col + "' not found in header");
        }
    }

    std::vector<DailyRecord> records;
    std::set<int> seen_dates;
    for (std::size_t row = 1; row < lines.size(); ++row) {
        if (lines[row].empty()) continue;
        std::vector<std::string> cells = split_fields(lines[row]);
        if (cells.size() > header.size()) {
            throw ParseError("row " + std::to_string(row + 1) + ": " +
                             std::to_string(cells.size()) + " cells but header has " +
                             std::to_string(header.size()));
        }
        cells.resize(header.size());

        auto date = Date::parse(cells[date_idx]);
        if (!date) {
            throw ParseError("row " + std::to_string(row + 1) + ": malformed date '" +
                             cells[date_idx] + "'");
        }
        if (!seen_dates.insert(date->serial()).second) {
            throw ConflictError("row " + std::to_string(row + 1) + ": duplicate date " +
                                date->to_iso());
        }

        DailyRecord rec;
        rec.date = *date;
        for (std::size_t i = 0; i < header.size(); ++i) {
            if (i == date_idx) continue;
            std::optional<double> v;
            try {
                v = parse_number(cells[i]);
            } catch (const ParseError& e) {
                throw ParseError("row " + std::to_string(row + 1) + ", column '" + header[i] +
                                 "': " + e.what());
            }
            if (v) rec.values.emplace(header[i], *v);
        }
        records.push_back(std::move(rec));
    }

    std::sort(records.begin(), records.end(),
              [](const DailyRecord& a, const DailyRecord& b) { return a.date < b.date; });
    return records;
}

std::vector<std::string> observed_columns(const std::vector<DailyRecord>& records) {
    std::vector<std::string> names;
    std::set<std::string> seen;
    for (const DailyRecord& rec : records) {
        for (const auto& [name, _] : rec.values) {
            if (seen.insert(name).second) names.push_back(name);
        }
    }
    return names;
}

int FeatureSeries::column_index(const std::string& name) const {
    for (std::size_t i = 0; i < feature_names.size(); ++i) {
        if (feature_names[i] == name) return static_cast<int>(i);
    }
    throw SchemaError("feature '" + name + "' not present in series");
}

FeatureSeries build_feature_series(const std::vector<DailyRecord>& records,
                                   const std::vector<std::string>& feature_names,
                                   Date start_date, Date end_date) {
    if (start_date > end_date) {
        throw RangeError("series start " + start_date.to_iso() + " after end " +
                         end_date.to_iso());
    }
    if (feature_names.empty()) {
        throw ConfigError("feature list is empty");
    }
    {
        std::set<std::string> uniq(feature_names.begin(), feature_names.end());
        if (uniq.size() != feature_names.size()) {
            throw ConfigError("feature list contains duplicate names");
        }
    }

    bool any_in_range = false;
    for (const DailyRecord& rec : records) {
        if (rec.date >= start_date && rec.date <= end_date) {
            any_in_range = true;
            break;
        }
    }
    if (!any_in_range) {
        throw RangeError("no records between " + start_date.to_iso() + " and " +
                         end_date.to_iso());
    }

    for (const std::string& name : feature_names) {
        bool observed = false;
        for (const DailyRecord& rec : records) {
            if (rec.values.count(name)) {
                observed = true;
                break;
            }
        }
        if (!observed) {
            throw SchemaError("feature '" + name + "' never observed in any record");
        }
    }

    const int days = end_date - start_date + 1;
    const int nf = static_cast<int>(feature_names.size());

    FeatureSeries series;
    series.start_date = start_date;
    series.feature_names = feature_names;
    series.rows = Tensor2(static_cast<std::size_t>(days), static_cast<std::size_t>(nf));
    for (const std::string& name : feature_names) series.imputation_log[name] = 0;

    std::map<int, const DailyRecord*> by_date;
    for (const DailyRecord& rec : records) by_date[rec.date.serial()] = &rec;

    for (int c = 0; c < nf; ++c) {
        const std::string& name = feature_names[c];
        std::optional<double> last;
        int fills = 0;
        for (int r = 0; r < days; ++r) {
            Date day = start_date + r;
            std::optional<double> observed;
            auto it = by_date.find(day.serial());
            if (it != by_date.end()) {
                auto vit = it->second->values.find(name);
                if (vit != it->second->values.end()) observed = vit->second;
            }
            double value;
            if (observed) {
                value = *observed;
                last = value;
            } else {
                value = last.value_or(0.0);
                ++fills;
            }
            series.rows(static_cast<std::size_t>(r), static_cast<std::size_t>(c)) = value;
        }
        series.imputation_log[name] = fills;
    }
    return series;
}

std::string write_series_csv(const FeatureSeries& series, const std::string& date_column) {
    std::string out = date_column;
    for (const std::string& name : series.feature_names) {
        out += ',';
        out += name;
    }
    out += '\n';
    char buf[64];
    for (int r = 0; r < series.days(); ++r) {
        out += (series.start_date + r).to_iso();
        for (std::size_t c = 0; c < series.feature_names.size(); ++c) {
            std::snprintf(buf, sizeof(buf), "%.17g",
                          series.rows(static_cast<std::size_t>(r), c));
            out += ',';
            out += buf;
        }
        out += '\n';
    }
    return out;
}

} // namespace surgecast
