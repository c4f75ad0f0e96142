#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "promptcast/config.hpp"
#include "promptcast/eval.hpp"

namespace promptcast {

struct RunOptions {
    std::optional<std::string> scenario;  // restrict to one scenario
    std::string split = "test";           // forecast/eval split
    std::optional<std::uint64_t> seed;    // restrict lm runs to one seed
};

/// Output layout helpers. Dataset files live under <out>/<scenario>/; the
/// key manifest stays outside that directory, under <out>/manifests/.
std::filesystem::path scenario_dir(const ExperimentConfig& config, std::string_view scenario);
std::filesystem::path numerical_file(const ExperimentConfig& config, std::string_view scenario,
                                     std::string_view split);
std::filesystem::path prompt_file(const ExperimentConfig& config, std::string_view scenario,
                                  std::string_view split, char which);  // 'x' or 'y'
std::filesystem::path prediction_file(const ExperimentConfig& config, std::string_view scenario,
                                      std::string_view split, std::string_view label);
std::filesystem::path manifest_file(const ExperimentConfig& config, std::string_view scenario);
std::filesystem::path zero_shot_dir(const ExperimentConfig& config);
std::filesystem::path report_file(const ExperimentConfig& config, std::string_view split,
                                  std::string_view extension);  // "json" or "txt"

/// Prediction-file label of one run: the backend name, with a _seed{N}
/// suffix for seeded lm_service runs.
std::string run_label(const BackendSpec& backend, std::uint64_t seed);

/// Ingests the raw sources, splits chronologically, windows every split and
/// writes the numerical dataset files plus the key manifest. Idempotent.
void cmd_build(const ExperimentConfig& config, const RunOptions& options = {});

/// Renders every split of every scenario into aligned x/y prompt files.
void cmd_prompt(const ExperimentConfig& config, const RunOptions& options = {});

/// Concatenates the train-split prompt files of the configured train
/// scenarios (in configured order) into a combined corpus with a provenance
/// manifest; the held-out scenario's test split is left untouched.
void cmd_assemble_zero_shot(const ExperimentConfig& config);

/// Runs one backend over a split and writes its prediction files.
void cmd_forecast(const ExperimentConfig& config, const std::string& backend_name,
                  const RunOptions& options = {});

/// Decodes every prediction file of the split, computes per-run metrics,
/// aggregates over seeds and writes the JSON and text reports.
Report cmd_eval(const ExperimentConfig& config, const RunOptions& options = {});

}  // namespace promptcast
