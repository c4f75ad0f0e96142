#include "promptcast/eval.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include <nlohmann/json.hpp>

#include "promptcast/errors.hpp"

namespace promptcast {

namespace {

void check_pair(std::span<const double> pred, std::span<const double> truth, const char* op) {
    if (pred.size() != truth.size()) {
        throw DataError(std::string(op) + ": length mismatch, " + std::to_string(pred.size()) +
                        " predictions vs " + std::to_string(truth.size()) + " truths");
    }
    if (pred.empty()) throw DataError(std::string(op) + ": empty input");
}

MetricSummary summarize(const std::vector<double>& values) {
    MetricSummary s;
    if (values.empty()) return s;
    double mean = 0.0;
    for (const double v : values) mean += v;
    mean /= static_cast<double>(values.size());
    double var = 0.0;
    for (const double v : values) var += (v - mean) * (v - mean);
    var /= static_cast<double>(values.size());
    s.mean = mean;
    s.stddev = std::sqrt(var);
    return s;
}

std::string format_cell(const MetricSummary& s) {
    if (!s.mean) return "n/a";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.3f±%.3f", *s.mean, *s.stddev);
    return buf;
}

/// Column width in display characters; the only multi-byte glyph we emit is ±.
std::size_t display_width(const std::string& s) {
    std::size_t bytes = s.size();
    for (auto pos = s.find("±"); pos != std::string::npos; pos = s.find("±", pos + 2)) {
        --bytes;
    }
    return bytes;
}

nlohmann::json metric_json(const MetricSummary& s) {
    nlohmann::json j;
    j["mean"] = s.mean ? nlohmann::json(*s.mean) : nlohmann::json(nullptr);
    j["std"] = s.stddev ? nlohmann::json(*s.stddev) : nlohmann::json(nullptr);
    return j;
}

}  // namespace

double missing_rate(std::size_t n_test, std::size_t n_decoded) {
    if (n_test == 0) throw DataError("missing_rate: n_test must be > 0");
    if (n_decoded > n_test) throw DataError("missing_rate: n_decoded exceeds n_test");
    return static_cast<double>(n_test - n_decoded) / static_cast<double>(n_test) * 100.0;
}

double rmse(std::span<const double> pred, std::span<const double> truth) {
    check_pair(pred, truth, "rmse");
    double sum = 0.0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        const double e = pred[i] - truth[i];
        sum += e * e;
    }
    return std::sqrt(sum / static_cast<double>(pred.size()));
}

double mae(std::span<const double> pred, std::span<const double> truth) {
    check_pair(pred, truth, "mae");
    double sum = 0.0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        sum += std::abs(pred[i] - truth[i]);
    }
    return sum / static_cast<double>(pred.size());
}

EvalResult evaluate(const std::vector<DecodedPrediction>& preds,
                    const std::vector<double>& truths) {
    if (preds.size() != truths.size()) {
        throw DataError("evaluate: " + std::to_string(preds.size()) + " predictions vs " +
                        std::to_string(truths.size()) + " truths");
    }
    EvalResult result;
    result.n_test = preds.size();

    std::vector<double> decoded_pred;
    std::vector<double> decoded_truth;
    for (std::size_t i = 0; i < preds.size(); ++i) {
        if (preds[i].decoded()) {
            decoded_pred.push_back(*preds[i].value);
            decoded_truth.push_back(truths[i]);
        }
    }
    result.n_decoded = decoded_pred.size();
    result.missing_rate = missing_rate(result.n_test, result.n_decoded);
    if (!decoded_pred.empty()) {
        result.rmse = rmse(decoded_pred, decoded_truth);
        result.mae = mae(decoded_pred, decoded_truth);
    }
    return result;
}

AggregateRow aggregate_runs(const std::vector<EvalResult>& results) {
    if (results.empty()) throw DataError("aggregate_runs: no results");
    AggregateRow row;
    row.scenario = results.front().scenario;
    row.backend = results.front().backend;
    row.runs = results.size();

    std::vector<double> rmses, maes, missings;
    for (const auto& r : results) {
        if (r.scenario != row.scenario || r.backend != row.backend) {
            throw DataError("aggregate_runs: mixed (scenario, backend) pairs: (" + row.scenario +
                            ", " + row.backend + ") vs (" + r.scenario + ", " + r.backend + ")");
        }
        if (r.rmse) rmses.push_back(*r.rmse);
        if (r.mae) maes.push_back(*r.mae);
        missings.push_back(r.missing_rate);
    }
    row.rmse = summarize(rmses);
    row.mae = summarize(maes);
    row.missing = summarize(missings);
    return row;
}

void write_report_json(const Report& report, const std::filesystem::path& path) {
    nlohmann::json j;
    j["split"] = report.split;
    j["runs"] = nlohmann::json::array();
    for (const auto& r : report.runs) {
        nlohmann::json run;
        run["scenario"] = r.scenario;
        run["backend"] = r.backend;
        run["seed"] = r.seed;
        run["n_test"] = r.n_test;
        run["n_decoded"] = r.n_decoded;
        run["missing_rate"] = r.missing_rate;
        run["rmse"] = r.rmse ? nlohmann::json(*r.rmse) : nlohmann::json(nullptr);
        run["mae"] = r.mae ? nlohmann::json(*r.mae) : nlohmann::json(nullptr);
        j["runs"].push_back(std::move(run));
    }
    j["aggregate"] = nlohmann::json::array();
    for (const auto& row : report.rows) {
        nlohmann::json agg;
        agg["scenario"] = row.scenario;
        agg["backend"] = row.backend;
        agg["runs"] = row.runs;
        agg["rmse"] = metric_json(row.rmse);
        agg["mae"] = metric_json(row.mae);
        agg["missing_rate"] = metric_json(row.missing);
        j["aggregate"].push_back(std::move(agg));
    }

    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path.string());
    out << j.dump(2) << '\n';
}

std::string format_report_table(const Report& report) {
    const std::vector<std::string> header = {"scenario", "backend", "RMSE", "MAE", "MissingRate"};
    std::vector<std::vector<std::string>> cells;
    cells.push_back(header);
    for (const auto& row : report.rows) {
        cells.push_back({row.scenario, row.backend, format_cell(row.rmse), format_cell(row.mae),
                         format_cell(row.missing)});
    }

    std::vector<std::size_t> widths(header.size(), 0);
    for (const auto& row : cells) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            widths[c] = std::max(widths[c], display_width(row[c]));
        }
    }

    std::string out;
    for (const auto& row : cells) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            out += row[c];
            if (c + 1 < row.size()) {
                out.append(widths[c] - display_width(row[c]) + 2, ' ');
            }
        }
        out += '\n';
    }
    return out;
}

void write_report_table(const Report& report, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path.string());
    out << format_report_table(report);
}

}  // namespace promptcast
