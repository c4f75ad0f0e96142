#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "promptcast/dataset.hpp"
#include "promptcast/decoding.hpp"
#include "promptcast/forecast.hpp"
#include "promptcast/ingest.hpp"

namespace promptcast {

struct ScenarioConfig {
    std::string name;
    std::filesystem::path raw_path;
    ColumnMapping columns;
    IngestConfig ingest;
    SplitSpec split;
    ScenarioTemplate tpl;
};

/// Fine-tune on the train splits of `train_scenarios`, evaluate on the
/// untouched test split of `test_scenario`.
struct ZeroShotProtocol {
    std::vector<std::string> train_scenarios;
    std::string test_scenario;
};

struct ExperimentConfig {
    std::vector<ScenarioConfig> scenarios;
    int t_obs = kDefaultObservationLength;
    std::vector<BackendSpec> backends;
    std::vector<std::uint64_t> seeds = {0};
    std::optional<ZeroShotProtocol> zero_shot;
    std::filesystem::path output_dir = "out";
    DecodeMode decode_mode = DecodeMode::strict;
    std::string prompt_separator = " ";
};

/// Reads a JSON experiment config. Relative raw-data paths resolve against
/// the config file's directory.
ExperimentConfig load_config(const std::filesystem::path& path);
ExperimentConfig parse_config(const std::string& json_text, const std::filesystem::path& base_dir);

const ScenarioConfig& find_scenario(const ExperimentConfig& config, std::string_view name);
const BackendSpec& find_backend(const ExperimentConfig& config, std::string_view name);

}  // namespace promptcast
