#include "promptcast/cli.hpp"

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "promptcast/config.hpp"
#include "promptcast/errors.hpp"
#include "promptcast/pipeline.hpp"

namespace promptcast::cli {

namespace {

constexpr int kExitOk = 0;
constexpr int kExitDataError = 1;
constexpr int kExitConfigError = 2;

struct CommonArgs {
    std::string config_path;
    std::string scenario;
    std::string split = "test";
    std::string out_dir;
    std::optional<std::uint64_t> seed;
};

void add_common(CLI::App* cmd, CommonArgs& args, bool with_split, bool with_seed) {
    cmd->add_option("--config", args.config_path, "Experiment config file (JSON)")
        ->required();
    cmd->add_option("--scenario", args.scenario, "Restrict to one scenario");
    cmd->add_option("--out", args.out_dir, "Override the configured output directory");
    if (with_split) {
        cmd->add_option("--split", args.split, "Dataset split (train, val, test)");
    }
    if (with_seed) {
        cmd->add_option("--seed", args.seed, "Run seed (lm backends)");
    }
}

ExperimentConfig load(const CommonArgs& args) {
    auto config = load_config(args.config_path);
    if (!args.out_dir.empty()) config.output_dir = args.out_dir;
    return config;
}

RunOptions options_from(const CommonArgs& args) {
    RunOptions options;
    if (!args.scenario.empty()) options.scenario = args.scenario;
    options.split = args.split;
    options.seed = args.seed;
    return options;
}

}  // namespace

int run(int argc, const char* const* argv) {
    CLI::App app{"PromptCast toolkit: prompt datasets, forecasts and evaluation"};
    app.require_subcommand(1);

    CommonArgs build_args, prompt_args, zero_shot_args, forecast_args, eval_args;
    std::string backend_name;

    auto* build = app.add_subcommand("build", "Ingest raw data and write numerical datasets");
    add_common(build, build_args, false, false);

    auto* prompt = app.add_subcommand("prompt", "Render numerical datasets into prompt files");
    add_common(prompt, prompt_args, false, false);

    auto* zero_shot = app.add_subcommand(
        "assemble-zero-shot", "Concatenate train prompts of the zero-shot train scenarios");
    add_common(zero_shot, zero_shot_args, false, false);

    auto* forecast = app.add_subcommand("forecast", "Run one backend over a split");
    add_common(forecast, forecast_args, true, true);
    forecast->add_option("--backend", backend_name, "Backend name from the config")->required();

    auto* eval = app.add_subcommand("eval", "Decode predictions, compute and report metrics");
    add_common(eval, eval_args, true, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfigError;
    }

    try {
        if (build->parsed()) {
            cmd_build(load(build_args), options_from(build_args));
        } else if (prompt->parsed()) {
            cmd_prompt(load(prompt_args), options_from(prompt_args));
        } else if (zero_shot->parsed()) {
            cmd_assemble_zero_shot(load(zero_shot_args));
        } else if (forecast->parsed()) {
            cmd_forecast(load(forecast_args), backend_name, options_from(forecast_args));
        } else if (eval->parsed()) {
            cmd_eval(load(eval_args), options_from(eval_args));
        }
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const DataError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDataError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDataError;
    }
    return kExitOk;
}

}  // namespace promptcast::cli
