#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "promptcast/ingest.hpp"

namespace promptcast {

inline constexpr int kDefaultObservationLength = 15;

/// Chronological split of a series. `boundaries` pins the last day of the
/// training and validation segments; `ratio` derives them from the series
/// length by floor division.
struct SplitSpec {
    enum class Mode { boundaries, ratio };
    Mode mode = Mode::ratio;
    Date train_end;  // boundaries mode: last day of train
    Date val_end;    // boundaries mode: last day of val
    int ratio_train = 7;
    int ratio_val = 1;
    int ratio_test = 2;

    static SplitSpec with_boundaries(Date train_end, Date val_end);
    static SplitSpec with_ratio(int train = 7, int val = 1, int test = 2);
};

struct SplitBoundaries {
    Date train_end;
    Date val_end;
};

/// Resolves ratio mode against a concrete period and validates
/// start <= train_end < val_end < end (so every segment is non-empty).
SplitBoundaries resolve_split(const SplitSpec& spec, Date start, Date end);

struct SplitSegments {
    ObjectSeries train;
    ObjectSeries val;
    ObjectSeries test;
};

/// train = [start, train_end], val = (train_end, val_end], test = (val_end, end].
SplitSegments split_chronological(const ObjectSeries& series, const SplitSpec& spec);

/// One forecasting unit: t_obs consecutive daily values plus the next day's value.
struct Instance {
    int object_index = 0;
    Date window_start;
    std::vector<double> window;  // length t_obs
    Date target_date;            // window_start + t_obs
    double target = 0.0;

    int t_obs() const { return static_cast<int>(window.size()); }
    Date window_end() const { return window_start.plus_days(t_obs() - 1); }
};

/// Sliding windows with step 1 day, entirely inside the segment:
/// (len - t_obs) instances when len > t_obs, none otherwise.
std::vector<Instance> make_instances(const ObjectSeries& segment, int t_obs);

/// Expected instance count for one object segment: max(days - t_obs, 0).
long long instance_count(long long segment_days, int t_obs);

struct NumericalDataset {
    std::string scenario;
    std::string split;  // train | val | test
    int t_obs = kDefaultObservationLength;
    std::vector<Instance> instances;  // ordered by (object_index, window_start)
};

/// Delimited text, one instance per line:
/// object_index, window_start_date, t_obs window values, target_value.
void write_numerical(const NumericalDataset& dataset, const std::filesystem::path& path);

NumericalDataset read_numerical(const std::filesystem::path& path, std::string scenario = "",
                                std::string split = "");

}  // namespace promptcast
