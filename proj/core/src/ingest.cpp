#include "promptcast/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <utility>

#include "promptcast/errors.hpp"
#include "text_util.hpp"

namespace promptcast {

namespace {

using detail::parse_double;
using detail::split;
using detail::trim;

struct TimestampParts {
    Date date;
    std::optional<int> hour;
};

/// "YYYY-MM-DD", optionally followed by 'T' or ' ' and "HH[:MM[:SS]]".
std::optional<TimestampParts> parse_timestamp(std::string_view text) {
    text = trim(text);
    if (text.size() < 10) return std::nullopt;
    const auto date = Date::try_from_iso(text.substr(0, 10));
    if (!date) return std::nullopt;
    if (text.size() == 10) return TimestampParts{*date, std::nullopt};

    if (text[10] != 'T' && text[10] != ' ') return std::nullopt;
    std::string_view rest = text.substr(11);
    if (rest.size() < 2 || !std::isdigit(static_cast<unsigned char>(rest[0])) ||
        !std::isdigit(static_cast<unsigned char>(rest[1]))) {
        return std::nullopt;
    }
    const int hour = (rest[0] - '0') * 10 + (rest[1] - '0');
    if (hour > 23) return std::nullopt;
    rest = rest.substr(2);
    // Optional ":MM" and ":SS"; anything else is malformed.
    for (int part = 0; part < 2 && !rest.empty(); ++part) {
        if (rest.size() < 3 || rest[0] != ':' ||
            !std::isdigit(static_cast<unsigned char>(rest[1])) ||
            !std::isdigit(static_cast<unsigned char>(rest[2]))) {
            return std::nullopt;
        }
        const int v = (rest[1] - '0') * 10 + (rest[2] - '0');
        if (v > 59) return std::nullopt;
        rest = rest.substr(3);
    }
    if (!rest.empty()) return std::nullopt;
    return TimestampParts{*date, hour};
}

std::size_t find_column(const std::vector<std::string_view>& header, const std::string& name,
                        const std::filesystem::path& path) {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (trim(header[i]) == name) return i;
    }
    throw ConfigError(path.string() + ": header has no column named '" + name + "'");
}

[[noreturn]] void row_error(const std::filesystem::path& path, std::size_t line_no,
                            const std::string& column, const std::string& detail) {
    throw DataError(path.string() + " line " + std::to_string(line_no) + ", column '" + column +
                    "': " + detail);
}

}  // namespace

std::vector<RawRecord> load_records(const std::filesystem::path& path,
                                    const ColumnMapping& mapping) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open raw file: " + path.string());

    std::vector<RawRecord> records;
    std::string line;
    std::size_t line_no = 0;

    if (!std::getline(in, line)) return records;  // empty file -> empty list
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto header = split(line, mapping.delimiter);
    const auto object_col = find_column(header, mapping.object_column, path);
    const auto timestamp_col = find_column(header, mapping.timestamp_column, path);
    const auto value_col = find_column(header, mapping.value_column, path);
    const auto needed = std::max({object_col, timestamp_col, value_col}) + 1;

    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) continue;
        const auto fields = split(line, mapping.delimiter);
        if (fields.size() < needed) {
            throw DataError(path.string() + " line " + std::to_string(line_no) + ": expected at least " +
                            std::to_string(needed) + " fields, got " + std::to_string(fields.size()));
        }

        RawRecord rec;
        rec.object_key = std::string(trim(fields[object_col]));
        if (rec.object_key.empty()) {
            row_error(path, line_no, mapping.object_column, "empty object key");
        }

        const auto ts = parse_timestamp(fields[timestamp_col]);
        if (!ts) {
            row_error(path, line_no, mapping.timestamp_column,
                      "cannot parse timestamp '" + std::string(trim(fields[timestamp_col])) + "'");
        }
        rec.date = ts->date;
        rec.hour = ts->hour;

        const auto value = parse_double(fields[value_col]);
        if (!value) {
            row_error(path, line_no, mapping.value_column,
                      "cannot parse value '" + std::string(trim(fields[value_col])) + "'");
        }
        if (!std::isfinite(*value)) {
            row_error(path, line_no, mapping.value_column,
                      "non-finite value '" + std::string(trim(fields[value_col])) + "'");
        }
        rec.value = *value;
        records.push_back(std::move(rec));
    }
    return records;
}

std::vector<RawRecord> aggregate_daily(const std::vector<RawRecord>& records) {
    std::map<std::string, std::map<Date, double>> sums;
    for (const auto& rec : records) {
        sums[rec.object_key][rec.date] += rec.value;
    }
    std::vector<RawRecord> out;
    for (const auto& [key, days] : sums) {
        for (const auto& [date, value] : days) {
            out.push_back(RawRecord{key, date, std::nullopt, value});
        }
    }
    return out;
}

SeriesMap collect_series(const std::vector<RawRecord>& records, const IngestConfig& config) {
    SeriesMap series;
    for (const auto& rec : records) {
        if (rec.date < config.collection_start || rec.date > config.collection_end) {
            throw DataError("record for object '" + rec.object_key + "' dated " + rec.date.iso() +
                            " lies outside the collection period [" + config.collection_start.iso() +
                            ", " + config.collection_end.iso() + "]");
        }
        const auto [it, inserted] = series[rec.object_key].emplace(rec.date, rec.value);
        if (!inserted) {
            throw DataError("duplicate value for object '" + rec.object_key + "' on " +
                            rec.date.iso() + " (two values for one day)");
        }
    }
    return series;
}

SeriesMap filter_complete(const SeriesMap& series, Date start, Date end) {
    const auto expected = static_cast<std::size_t>(days_inclusive(start, end));
    SeriesMap complete;
    for (const auto& [key, days] : series) {
        if (days.size() == expected) complete.emplace(key, days);
    }
    if (complete.empty()) {
        throw DataError("none of the " + std::to_string(series.size()) +
                        " objects covers every day of [" + start.iso() + ", " + end.iso() +
                        "]; check the collection period and aggregation mode");
    }
    return complete;
}

Selection select_and_reindex(const SeriesMap& series, int count, std::uint64_t seed,
                             Date start, Date end) {
    if (count < 1) throw ConfigError("object_count must be >= 1");
    if (static_cast<int>(series.size()) < count) {
        throw DataError("only " + std::to_string(series.size()) +
                        " complete objects available but " + std::to_string(count) +
                        " requested (" + std::to_string(series.size()) + " < " +
                        std::to_string(count) + ")");
    }

    std::vector<std::string> keys;
    keys.reserve(series.size());
    for (const auto& [key, _] : series) keys.push_back(key);  // sorted by map order

    // Hand-rolled Fisher-Yates over mt19937_64: std::shuffle is not
    // specified to produce the same permutation across standard libraries.
    std::mt19937_64 rng(seed);
    for (std::size_t i = keys.size() - 1; i > 0; --i) {
        const std::size_t j = static_cast<std::size_t>(rng() % (i + 1));
        std::swap(keys[i], keys[j]);
    }

    Selection selection;
    const auto len = static_cast<std::size_t>(days_inclusive(start, end));
    for (int m = 1; m <= count; ++m) {
        const auto& key = keys[static_cast<std::size_t>(m - 1)];
        const auto& days = series.at(key);
        ObjectSeries os;
        os.object_index = m;
        os.start_date = start;
        os.values.reserve(len);
        for (const auto& [_, value] : days) os.values.push_back(value);
        selection.series.push_back(std::move(os));
        selection.key_to_index.emplace(key, m);
    }
    return selection;
}

Selection run_ingest(const std::vector<RawRecord>& records, const IngestConfig& config) {
    if (config.collection_end < config.collection_start) {
        throw ConfigError("collection_end precedes collection_start");
    }
    const auto& daily =
        config.aggregation == Aggregation::daily_sum ? aggregate_daily(records) : records;
    const auto series = collect_series(daily, config);
    const auto complete = filter_complete(series, config.collection_start, config.collection_end);
    return select_and_reindex(complete, config.object_count, config.selection_seed,
                              config.collection_start, config.collection_end);
}

}  // namespace promptcast
