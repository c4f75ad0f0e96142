#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "promptcast/date.hpp"

namespace promptcast {

/// One parsed row of a raw source file.
struct RawRecord {
    std::string object_key;
    Date date;
    std::optional<int> hour;  // present for sub-daily timestamps
    double value = 0.0;
};

enum class Aggregation { none, daily_sum };

struct IngestConfig {
    Date collection_start;
    Date collection_end;
    Aggregation aggregation = Aggregation::none;
    int object_count = 1;  // M, objects to select and reindex
    std::uint64_t selection_seed = 0;
};

/// Column names of the raw delimited file. The file must carry a header row;
/// fields are separated by `delimiter` (',' or '\t').
struct ColumnMapping {
    std::string object_column;
    std::string timestamp_column;
    std::string value_column;
    char delimiter = ',';
};

/// Daily series of one anonymized object: one value per day, no gaps.
struct ObjectSeries {
    int object_index = 0;  // 1..M
    Date start_date;
    std::vector<double> values;

    Date date_at(std::size_t i) const { return start_date.plus_days(static_cast<int>(i)); }
    Date end_date() const { return start_date.plus_days(static_cast<int>(values.size()) - 1); }
};

/// object key -> (date -> value), both levels ordered.
using SeriesMap = std::map<std::string, std::map<Date, double>>;

/// Parses a delimited text file with a header row. Malformed rows and
/// non-finite values raise DataError naming the line and column.
std::vector<RawRecord> load_records(const std::filesystem::path& path, const ColumnMapping& mapping);

/// Sums sub-daily values into one record per (object, day). Days without
/// records produce no output record.
std::vector<RawRecord> aggregate_daily(const std::vector<RawRecord>& records);

/// Groups records by object and date. A duplicate (object, date) pair or a
/// timestamp outside the collection period raises DataError.
SeriesMap collect_series(const std::vector<RawRecord>& records, const IngestConfig& config);

/// Keeps only objects with exactly one value for every day of [start, end].
/// Raises DataError when nothing survives.
SeriesMap filter_complete(const SeriesMap& series, Date start, Date end);

struct Selection {
    std::vector<ObjectSeries> series;         // ordered by object_index
    std::map<std::string, int> key_to_index;  // original key -> 1..M (manifest only)
};

/// Seeded shuffle over the lexicographically sorted object keys; the first
/// `count` keys receive indices 1..count in shuffled order. Original keys
/// appear only in the returned manifest mapping, never in outputs.
Selection select_and_reindex(const SeriesMap& series, int count, std::uint64_t seed,
                             Date start, Date end);

/// Full ingest: aggregate (when configured), validate, filter, select.
Selection run_ingest(const std::vector<RawRecord>& records, const IngestConfig& config);

}  // namespace promptcast
