#include "promptcast/pipeline.hpp"

#include <fstream>
#include <iostream>

#include <nlohmann/json.hpp>

#include "promptcast/errors.hpp"
#include "text_util.hpp"

namespace promptcast {

namespace {

const std::vector<std::string> kSplits = {"train", "val", "test"};

bool valid_split(std::string_view split) {
    return split == "train" || split == "val" || split == "test";
}

std::vector<const ScenarioConfig*> selected_scenarios(const ExperimentConfig& config,
                                                      const RunOptions& options,
                                                      bool default_to_zero_shot_test) {
    std::vector<const ScenarioConfig*> out;
    if (options.scenario) {
        out.push_back(&find_scenario(config, *options.scenario));
        return out;
    }
    if (default_to_zero_shot_test && config.zero_shot) {
        out.push_back(&find_scenario(config, config.zero_shot->test_scenario));
        return out;
    }
    for (const auto& sc : config.scenarios) out.push_back(&sc);
    return out;
}

void require_split(const RunOptions& options) {
    if (!valid_split(options.split)) {
        throw ConfigError("unknown split '" + options.split + "' (expected train, val or test)");
    }
}

NumericalDataset load_split_dataset(const ExperimentConfig& config, const ScenarioConfig& sc,
                                    std::string_view split) {
    const auto path = numerical_file(config, sc.name, split);
    if (!std::filesystem::exists(path)) {
        throw ConfigError("numerical dataset " + path.string() +
                          " not found; run 'build' first");
    }
    return read_numerical(path, sc.name, std::string(split));
}

void check_alignment(const std::filesystem::path& file, std::size_t lines,
                     const std::filesystem::path& reference, std::size_t expected);

std::vector<std::string> load_prompts(const ExperimentConfig& config, const ScenarioConfig& sc,
                                      std::string_view split) {
    const auto path = prompt_file(config, sc.name, split, 'x');
    if (!std::filesystem::exists(path)) {
        throw ConfigError("prompt file " + path.string() + " not found; run 'prompt' first");
    }
    auto prompts = read_lines(path);
    const auto num_path = numerical_file(config, sc.name, split);
    if (std::filesystem::exists(num_path)) {
        const auto num_lines = read_lines(num_path).size();
        check_alignment(path, prompts.size(), num_path, num_lines == 0 ? 0 : num_lines - 1);
    }
    return prompts;
}

void write_lines(const std::vector<std::string>& lines, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path.string());
    for (const auto& line : lines) out << line << '\n';
    if (!out) throw DataError("failed while writing " + path.string());
}

void check_alignment(const std::filesystem::path& file, std::size_t lines,
                     const std::filesystem::path& reference, std::size_t expected) {
    if (lines != expected) {
        throw DataError("misaligned files: " + file.string() + " has " + std::to_string(lines) +
                        " lines but " + reference.string() + " has " + std::to_string(expected));
    }
}

/// Runs of one backend found on disk for a split: (label, seed) pairs, in a
/// deterministic order.
std::vector<std::pair<std::string, std::uint64_t>> existing_runs(
    const ExperimentConfig& config, const ScenarioConfig& sc, std::string_view split,
    const BackendSpec& backend, const RunOptions& options) {
    std::vector<std::pair<std::string, std::uint64_t>> runs;
    const auto plain = run_label(backend, 0);
    if (backend.kind != BackendKind::lm_service) {
        if (std::filesystem::exists(prediction_file(config, sc.name, split, plain))) {
            runs.emplace_back(plain, 0);
        }
        return runs;
    }
    const auto seeds = options.seed ? std::vector<std::uint64_t>{*options.seed} : config.seeds;
    for (const auto seed : seeds) {
        const auto label = run_label(backend, seed);
        if (std::filesystem::exists(prediction_file(config, sc.name, split, label))) {
            runs.emplace_back(label, seed);
        }
    }
    return runs;
}

}  // namespace

std::filesystem::path scenario_dir(const ExperimentConfig& config, std::string_view scenario) {
    return config.output_dir / scenario;
}

std::filesystem::path numerical_file(const ExperimentConfig& config, std::string_view scenario,
                                     std::string_view split) {
    return scenario_dir(config, scenario) / (std::string(split) + "_numerical.csv");
}

std::filesystem::path prompt_file(const ExperimentConfig& config, std::string_view scenario,
                                  std::string_view split, char which) {
    return scenario_dir(config, scenario) /
           (std::string(split) + "_" + std::string(1, which) + "_prompt.txt");
}

std::filesystem::path prediction_file(const ExperimentConfig& config, std::string_view scenario,
                                      std::string_view split, std::string_view label) {
    return scenario_dir(config, scenario) /
           (std::string(split) + "_yhat_" + std::string(label) + ".txt");
}

std::filesystem::path manifest_file(const ExperimentConfig& config, std::string_view scenario) {
    return config.output_dir / "manifests" / (std::string(scenario) + ".json");
}

std::filesystem::path zero_shot_dir(const ExperimentConfig& config) {
    if (!config.zero_shot) throw ConfigError("no zero_shot protocol configured");
    return config.output_dir / ("zero_shot_" + config.zero_shot->test_scenario);
}

std::filesystem::path report_file(const ExperimentConfig& config, std::string_view split,
                                  std::string_view extension) {
    return config.output_dir /
           ("report_" + std::string(split) + "." + std::string(extension));
}

std::string run_label(const BackendSpec& backend, std::uint64_t seed) {
    if (backend.kind == BackendKind::lm_service) {
        return backend.name + "_seed" + std::to_string(seed);
    }
    return backend.name;
}

void cmd_build(const ExperimentConfig& config, const RunOptions& options) {
    for (const auto* sc : selected_scenarios(config, options, false)) {
        const auto records = load_records(sc->raw_path, sc->columns);
        const auto selection = run_ingest(records, sc->ingest);

        const auto dir = scenario_dir(config, sc->name);
        std::filesystem::create_directories(dir);

        // Window each split independently so instances never straddle a
        // boundary; ordering is (object_index, window_start) by construction.
        NumericalDataset datasets[3];
        for (std::size_t s = 0; s < kSplits.size(); ++s) {
            datasets[s].scenario = sc->name;
            datasets[s].split = kSplits[s];
            datasets[s].t_obs = config.t_obs;
        }
        for (const auto& series : selection.series) {
            const auto segments = split_chronological(series, sc->split);
            const ObjectSeries* parts[3] = {&segments.train, &segments.val, &segments.test};
            for (std::size_t s = 0; s < kSplits.size(); ++s) {
                auto instances = make_instances(*parts[s], config.t_obs);
                datasets[s].instances.insert(datasets[s].instances.end(),
                                             std::make_move_iterator(instances.begin()),
                                             std::make_move_iterator(instances.end()));
            }
        }
        for (std::size_t s = 0; s < kSplits.size(); ++s) {
            write_numerical(datasets[s], numerical_file(config, sc->name, kSplits[s]));
            std::cout << sc->name << " " << kSplits[s] << ": " << datasets[s].instances.size()
                      << " instances\n";
        }

        const auto manifest_path = manifest_file(config, sc->name);
        std::filesystem::create_directories(manifest_path.parent_path());
        nlohmann::json manifest;
        manifest["scenario"] = sc->name;
        manifest["selection_seed"] = sc->ingest.selection_seed;
        manifest["index_of"] = nlohmann::json::object();
        for (const auto& [key, index] : selection.key_to_index) {
            manifest["index_of"][key] = index;
        }
        std::ofstream out(manifest_path, std::ios::binary);
        if (!out) throw DataError("cannot write " + manifest_path.string());
        out << manifest.dump(2) << '\n';
    }
}

void cmd_prompt(const ExperimentConfig& config, const RunOptions& options) {
    for (const auto* sc : selected_scenarios(config, options, false)) {
        for (const auto& split : kSplits) {
            const auto dataset = load_split_dataset(config, *sc, split);
            const auto pairs = render_prompts(dataset, sc->tpl, config.prompt_separator);
            write_prompt_files(pairs, split, scenario_dir(config, sc->name));
            std::cout << sc->name << " " << split << ": " << pairs.size() << " prompt pairs\n";
        }
    }
}

void cmd_assemble_zero_shot(const ExperimentConfig& config) {
    if (!config.zero_shot) throw ConfigError("no zero_shot protocol configured");
    const auto& protocol = *config.zero_shot;
    for (const auto& name : protocol.train_scenarios) {
        if (name == protocol.test_scenario) {
            throw ConfigError("zero-shot test scenario '" + name +
                              "' also appears in train_scenarios");
        }
    }

    const auto dir = zero_shot_dir(config);
    std::filesystem::create_directories(dir);

    std::vector<std::string> combined_x;
    std::vector<std::string> combined_y;
    nlohmann::json line_counts = nlohmann::json::object();
    for (const auto& name : protocol.train_scenarios) {
        const auto& sc = find_scenario(config, name);
        const auto x_path = prompt_file(config, sc.name, "train", 'x');
        const auto y_path = prompt_file(config, sc.name, "train", 'y');
        if (!std::filesystem::exists(x_path) || !std::filesystem::exists(y_path)) {
            throw ConfigError("train prompt files for scenario '" + name +
                              "' not found; run 'prompt' first");
        }
        const auto x = read_lines(x_path);
        const auto y = read_lines(y_path);
        check_alignment(y_path, y.size(), x_path, x.size());
        combined_x.insert(combined_x.end(), x.begin(), x.end());
        combined_y.insert(combined_y.end(), y.begin(), y.end());
        line_counts[name] = x.size();
    }

    write_lines(combined_x, dir / "train_x_prompt.txt");
    write_lines(combined_y, dir / "train_y_prompt.txt");

    nlohmann::json provenance;
    provenance["train_scenarios"] = protocol.train_scenarios;
    provenance["test_scenario"] = protocol.test_scenario;
    provenance["lines"] = line_counts;
    provenance["total"] = combined_x.size();
    std::ofstream out(dir / "provenance.json", std::ios::binary);
    if (!out) throw DataError("cannot write " + (dir / "provenance.json").string());
    out << provenance.dump(2) << '\n';

    std::cout << "zero-shot corpus: " << combined_x.size() << " training pairs, test scenario "
              << protocol.test_scenario << "\n";
}

void cmd_forecast(const ExperimentConfig& config, const std::string& backend_name,
                  const RunOptions& options) {
    require_split(options);
    const auto& backend = find_backend(config, backend_name);

    for (const auto* sc : selected_scenarios(config, options, true)) {
        switch (backend.kind) {
            case BackendKind::cy:
            case BackendKind::ha:
            case BackendKind::clw: {
                const auto dataset = load_split_dataset(config, *sc, options.split);
                std::vector<std::string> lines;
                lines.reserve(dataset.instances.size());
                for (const auto& inst : dataset.instances) {
                    lines.push_back(detail::format_double(predict_numeric(inst, backend.kind)));
                }
                write_lines(lines, prediction_file(config, sc->name, options.split,
                                                   run_label(backend, 0)));
                std::cout << sc->name << " " << options.split << " " << backend.name << ": "
                          << lines.size() << " predictions\n";
                break;
            }
            case BackendKind::oracle_wrap: {
                const auto dataset = load_split_dataset(config, *sc, options.split);
                std::vector<std::string> lines;
                lines.reserve(dataset.instances.size());
                for (const auto& inst : dataset.instances) {
                    lines.push_back(oracle_wrap(inst, backend.inner, sc->tpl));
                }
                write_lines(lines, prediction_file(config, sc->name, options.split,
                                                   run_label(backend, 0)));
                std::cout << sc->name << " " << options.split << " " << backend.name << ": "
                          << lines.size() << " generations\n";
                break;
            }
            case BackendKind::fixed_mock: {
                const auto prompts = load_prompts(config, *sc, options.split);
                const std::vector<std::string> lines(prompts.size(), backend.fixed_text);
                write_lines(lines, prediction_file(config, sc->name, options.split,
                                                   run_label(backend, 0)));
                std::cout << sc->name << " " << options.split << " " << backend.name << ": "
                          << lines.size() << " generations\n";
                break;
            }
            case BackendKind::lm_service: {
                const auto prompts = load_prompts(config, *sc, options.split);
                const auto seeds =
                    options.seed ? std::vector<std::uint64_t>{*options.seed} : config.seeds;
                for (const auto seed : seeds) {
                    BackendSpec run_spec = backend;
                    run_spec.seed = seed;
                    const auto texts = lm_generate(prompts, run_spec);
                    write_lines(texts, prediction_file(config, sc->name, options.split,
                                                       run_label(backend, seed)));
                    std::cout << sc->name << " " << options.split << " " << backend.name
                              << " seed " << seed << ": " << texts.size() << " generations\n";
                }
                break;
            }
        }
    }
}

Report cmd_eval(const ExperimentConfig& config, const RunOptions& options) {
    require_split(options);
    Report report;
    report.split = options.split;

    for (const auto* sc : selected_scenarios(config, options, true)) {
        const auto num_path = numerical_file(config, sc->name, options.split);
        const auto dataset = load_split_dataset(config, *sc, options.split);
        std::vector<double> truths;
        truths.reserve(dataset.instances.size());
        for (const auto& inst : dataset.instances) truths.push_back(inst.target);
        const auto n_test = truths.size();

        // Prompt files, when present, must stay aligned with the dataset.
        for (const char which : {'x', 'y'}) {
            const auto path = prompt_file(config, sc->name, options.split, which);
            if (std::filesystem::exists(path)) {
                check_alignment(path, read_lines(path).size(), num_path, n_test);
            }
        }

        std::vector<EvalResult> scenario_runs;
        for (const auto& backend : config.backends) {
            std::vector<EvalResult> backend_runs;
            for (const auto& [label, seed] : existing_runs(config, *sc, options.split, backend,
                                                           options)) {
                const auto pred_path = prediction_file(config, sc->name, options.split, label);
                const auto lines = read_lines(pred_path);
                check_alignment(pred_path, lines.size(), num_path, n_test);

                std::vector<DecodedPrediction> preds;
                preds.reserve(lines.size());
                if (is_numeric_backend(backend.kind)) {
                    for (std::size_t i = 0; i < lines.size(); ++i) {
                        const auto v = detail::parse_double(lines[i]);
                        if (!v) {
                            throw DataError(pred_path.string() + " line " + std::to_string(i + 1) +
                                            ": cannot parse numeric prediction '" + lines[i] +
                                            "'");
                        }
                        preds.push_back({*v, lines[i]});
                    }
                } else {
                    preds = batch_decode(lines, sc->tpl, config.decode_mode);
                }

                auto result = evaluate(preds, truths);
                result.scenario = sc->name;
                result.backend = backend.name;
                result.seed = seed;
                backend_runs.push_back(std::move(result));
            }
            if (!backend_runs.empty()) {
                report.rows.push_back(aggregate_runs(backend_runs));
                scenario_runs.insert(scenario_runs.end(), backend_runs.begin(),
                                     backend_runs.end());
            }
        }
        report.runs.insert(report.runs.end(), scenario_runs.begin(), scenario_runs.end());
    }

    if (report.runs.empty()) {
        throw DataError("no prediction files found for split '" + options.split +
                        "'; run 'forecast' first");
    }

    std::filesystem::create_directories(config.output_dir);
    write_report_json(report, report_file(config, options.split, "json"));
    write_report_table(report, report_file(config, options.split, "txt"));
    std::cout << format_report_table(report);
    return report;
}

}  // namespace promptcast
