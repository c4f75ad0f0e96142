#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "promptcast/decoding.hpp"

namespace promptcast {

/// (n_test - n_decoded) / n_test * 100. Requires n_decoded <= n_test and
/// n_test > 0.
double missing_rate(std::size_t n_test, std::size_t n_decoded);

double rmse(std::span<const double> pred, std::span<const double> truth);
double mae(std::span<const double> pred, std::span<const double> truth);

/// Metrics of one (scenario, backend, seed) run. rmse/mae are absent when no
/// prediction decoded.
struct EvalResult {
    std::optional<double> rmse;
    std::optional<double> mae;
    double missing_rate = 0.0;
    std::size_t n_test = 0;
    std::size_t n_decoded = 0;
    std::string scenario;
    std::string backend;
    std::uint64_t seed = 0;
};

/// Missing predictions are excluded from the RMSE/MAE pairs; the missing
/// rate is computed over all entries.
EvalResult evaluate(const std::vector<DecodedPrediction>& preds,
                    const std::vector<double>& truths);

struct MetricSummary {
    std::optional<double> mean;
    std::optional<double> stddev;  // population standard deviation
};

struct AggregateRow {
    std::string scenario;
    std::string backend;
    std::size_t runs = 0;
    MetricSummary rmse;
    MetricSummary mae;
    MetricSummary missing;
};

/// Mean and population standard deviation per metric over runs that share
/// (scenario, backend). Mixed inputs or an empty list raise DataError.
AggregateRow aggregate_runs(const std::vector<EvalResult>& results);

struct Report {
    std::string split;
    std::vector<EvalResult> runs;
    std::vector<AggregateRow> rows;
};

void write_report_json(const Report& report, const std::filesystem::path& path);
void write_report_table(const Report& report, const std::filesystem::path& path);

/// Aligned plain-text table: scenario, backend, RMSE, MAE, MissingRate,
/// each metric as mean±std.
std::string format_report_table(const Report& report);

}  // namespace promptcast
