#include "promptcast/dataset.hpp"

#include <fstream>
#include <utility>

#include "promptcast/errors.hpp"
#include "text_util.hpp"

namespace promptcast {

namespace {

using detail::format_double;
using detail::parse_double;
using detail::parse_int;
using detail::split;
using detail::trim;

ObjectSeries slice(const ObjectSeries& series, int first_offset, int len) {
    ObjectSeries segment;
    segment.object_index = series.object_index;
    segment.start_date = series.start_date.plus_days(first_offset);
    segment.values.assign(series.values.begin() + first_offset,
                          series.values.begin() + first_offset + len);
    return segment;
}

}  // namespace

SplitSpec SplitSpec::with_boundaries(Date train_end, Date val_end) {
    SplitSpec spec;
    spec.mode = Mode::boundaries;
    spec.train_end = train_end;
    spec.val_end = val_end;
    return spec;
}

SplitSpec SplitSpec::with_ratio(int train, int val, int test) {
    SplitSpec spec;
    spec.mode = Mode::ratio;
    spec.ratio_train = train;
    spec.ratio_val = val;
    spec.ratio_test = test;
    return spec;
}

SplitBoundaries resolve_split(const SplitSpec& spec, Date start, Date end) {
    SplitBoundaries b;
    if (spec.mode == SplitSpec::Mode::ratio) {
        if (spec.ratio_train < 1 || spec.ratio_val < 1 || spec.ratio_test < 1) {
            throw ConfigError("split ratio parts must all be >= 1");
        }
        const long long days = days_inclusive(start, end);
        const long long total = spec.ratio_train + spec.ratio_val + spec.ratio_test;
        const long long train_days = days * spec.ratio_train / total;
        const long long val_days = days * spec.ratio_val / total;
        if (train_days < 1 || val_days < 1 || train_days + val_days >= days) {
            throw ConfigError("period of " + std::to_string(days) +
                              " days is too short for a " + std::to_string(spec.ratio_train) + ":" +
                              std::to_string(spec.ratio_val) + ":" +
                              std::to_string(spec.ratio_test) + " split");
        }
        b.train_end = start.plus_days(static_cast<int>(train_days) - 1);
        b.val_end = b.train_end.plus_days(static_cast<int>(val_days));
    } else {
        b.train_end = spec.train_end;
        b.val_end = spec.val_end;
    }
    if (b.train_end < start || !(b.train_end < b.val_end) || !(b.val_end < end)) {
        throw ConfigError("split boundaries must satisfy " + start.iso() + " <= train_end (" +
                          b.train_end.iso() + ") < val_end (" + b.val_end.iso() + ") < " +
                          end.iso());
    }
    return b;
}

SplitSegments split_chronological(const ObjectSeries& series, const SplitSpec& spec) {
    const Date start = series.start_date;
    const Date end = series.end_date();
    const auto b = resolve_split(spec, start, end);

    const int train_len = days_inclusive(start, b.train_end);
    const int val_len = b.val_end - b.train_end;
    const int test_len = end - b.val_end;

    SplitSegments segments;
    segments.train = slice(series, 0, train_len);
    segments.val = slice(series, train_len, val_len);
    segments.test = slice(series, train_len + val_len, test_len);
    return segments;
}

std::vector<Instance> make_instances(const ObjectSeries& segment, int t_obs) {
    if (t_obs < 1) throw ConfigError("t_obs must be >= 1");
    std::vector<Instance> instances;
    const auto len = static_cast<long long>(segment.values.size());
    if (len <= t_obs) return instances;

    instances.reserve(static_cast<std::size_t>(len - t_obs));
    for (long long i = 0; i + t_obs < len; ++i) {
        Instance inst;
        inst.object_index = segment.object_index;
        inst.window_start = segment.start_date.plus_days(static_cast<int>(i));
        inst.window.assign(segment.values.begin() + i, segment.values.begin() + i + t_obs);
        inst.target_date = inst.window_start.plus_days(t_obs);
        inst.target = segment.values[static_cast<std::size_t>(i + t_obs)];
        instances.push_back(std::move(inst));
    }
    return instances;
}

long long instance_count(long long segment_days, int t_obs) {
    return segment_days > t_obs ? segment_days - t_obs : 0;
}

void write_numerical(const NumericalDataset& dataset, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path.string());

    out << "object_index,window_start_date";
    for (int i = 1; i <= dataset.t_obs; ++i) out << ",x" << i;
    out << ",target_value\n";

    for (const auto& inst : dataset.instances) {
        out << inst.object_index << ',' << inst.window_start.iso();
        for (const double v : inst.window) out << ',' << format_double(v);
        out << ',' << format_double(inst.target) << '\n';
    }
    if (!out) throw DataError("failed while writing " + path.string());
}

NumericalDataset read_numerical(const std::filesystem::path& path, std::string scenario,
                                std::string split_name) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open numerical dataset: " + path.string());

    NumericalDataset dataset;
    dataset.scenario = std::move(scenario);
    dataset.split = std::move(split_name);

    std::string line;
    if (!std::getline(in, line)) throw DataError(path.string() + ": missing header");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto header = split(line, ',');
    if (header.size() < 4 || header[0] != "object_index" || header[1] != "window_start_date" ||
        header.back() != "target_value") {
        throw DataError(path.string() + ": unexpected header '" + line + "'");
    }
    dataset.t_obs = static_cast<int>(header.size()) - 3;

    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) continue;
        const auto fields = split(line, ',');
        if (fields.size() != header.size()) {
            throw DataError(path.string() + " line " + std::to_string(line_no) + ": expected " +
                            std::to_string(header.size()) + " fields, got " +
                            std::to_string(fields.size()));
        }
        Instance inst;
        const auto index = parse_int(fields[0]);
        if (!index || *index < 1) {
            throw DataError(path.string() + " line " + std::to_string(line_no) +
                            ": bad object_index '" + std::string(fields[0]) + "'");
        }
        inst.object_index = static_cast<int>(*index);
        const auto start = Date::try_from_iso(trim(fields[1]));
        if (!start) {
            throw DataError(path.string() + " line " + std::to_string(line_no) +
                            ": bad window_start_date '" + std::string(fields[1]) + "'");
        }
        inst.window_start = *start;
        inst.window.reserve(static_cast<std::size_t>(dataset.t_obs));
        for (int i = 0; i < dataset.t_obs; ++i) {
            const auto v = parse_double(fields[static_cast<std::size_t>(2 + i)]);
            if (!v) {
                throw DataError(path.string() + " line " + std::to_string(line_no) +
                                ": bad value in column x" + std::to_string(i + 1));
            }
            inst.window.push_back(*v);
        }
        const auto target = parse_double(fields.back());
        if (!target) {
            throw DataError(path.string() + " line " + std::to_string(line_no) +
                            ": bad target_value '" + std::string(fields.back()) + "'");
        }
        inst.target = *target;
        inst.target_date = inst.window_start.plus_days(dataset.t_obs);
        dataset.instances.push_back(std::move(inst));
    }
    return dataset;
}

}  // namespace promptcast
