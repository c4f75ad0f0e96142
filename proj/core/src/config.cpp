#include "promptcast/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "promptcast/errors.hpp"

namespace promptcast {

namespace {

using nlohmann::json;

const json& require(const json& j, const char* key, const std::string& where) {
    const auto it = j.find(key);
    if (it == j.end()) throw ConfigError(where + ": missing key '" + key + "'");
    return *it;
}

std::string require_string(const json& j, const char* key, const std::string& where) {
    const auto& v = require(j, key, where);
    if (!v.is_string()) throw ConfigError(where + ": '" + key + "' must be a string");
    return v.get<std::string>();
}

Date require_date(const json& j, const char* key, const std::string& where) {
    const auto text = require_string(j, key, where);
    const auto d = Date::try_from_iso(text);
    if (!d) throw ConfigError(where + ": '" + key + "' is not a YYYY-MM-DD date: " + text);
    return *d;
}

char parse_delimiter(const json& j, const std::string& where) {
    if (!j.contains("delimiter")) return ',';
    const auto text = j["delimiter"].get<std::string>();
    if (text == "," || text == "comma") return ',';
    if (text == "\t" || text == "tab") return '\t';
    throw ConfigError(where + ": delimiter must be ',' or '\\t'");
}

SplitSpec parse_split(const json& j, const std::string& where) {
    if (!j.contains("split")) return SplitSpec::with_ratio();
    const auto& s = j["split"];
    if (s.contains("ratio")) {
        const auto& r = s["ratio"];
        if (!r.is_array() || r.size() != 3) {
            throw ConfigError(where + ": split.ratio must be an array of three integers");
        }
        return SplitSpec::with_ratio(r[0].get<int>(), r[1].get<int>(), r[2].get<int>());
    }
    return SplitSpec::with_boundaries(require_date(s, "train_end", where + ".split"),
                                      require_date(s, "val_end", where + ".split"));
}

ScenarioTemplate parse_template(const json& j, const std::string& where) {
    const auto& t = require(j, "template", where);
    ScenarioTemplate tpl;
    if (t.is_string()) {
        tpl = builtin_template(t.get<std::string>());
    } else if (t.is_object()) {
        tpl.name = require_string(t, "name", where + ".template");
        tpl.context = require_string(t, "context", where + ".template");
        tpl.question = require_string(t, "question", where + ".template");
        tpl.answer = require_string(t, "answer", where + ".template");
    } else {
        throw ConfigError(where + ": template must be a built-in name or an object");
    }
    validate_template(tpl);
    return tpl;
}

ScenarioConfig parse_scenario(const json& j, const std::filesystem::path& base_dir) {
    ScenarioConfig sc;
    sc.name = require_string(j, "name", "scenario");
    const std::string where = "scenario '" + sc.name + "'";

    std::filesystem::path raw = require_string(j, "raw_path", where);
    sc.raw_path = raw.is_absolute() ? raw : base_dir / raw;

    const auto& cols = require(j, "columns", where);
    sc.columns.object_column = require_string(cols, "object", where + ".columns");
    sc.columns.timestamp_column = require_string(cols, "timestamp", where + ".columns");
    sc.columns.value_column = require_string(cols, "value", where + ".columns");
    sc.columns.delimiter = parse_delimiter(j, where);

    sc.ingest.collection_start = require_date(j, "collection_start", where);
    sc.ingest.collection_end = require_date(j, "collection_end", where);
    if (sc.ingest.collection_end < sc.ingest.collection_start) {
        throw ConfigError(where + ": collection_end precedes collection_start");
    }
    if (j.contains("aggregation")) {
        const auto agg = j["aggregation"].get<std::string>();
        if (agg == "none") {
            sc.ingest.aggregation = Aggregation::none;
        } else if (agg == "daily_sum") {
            sc.ingest.aggregation = Aggregation::daily_sum;
        } else {
            throw ConfigError(where + ": aggregation must be 'none' or 'daily_sum'");
        }
    }
    sc.ingest.object_count = require(j, "object_count", where).get<int>();
    if (sc.ingest.object_count < 1) throw ConfigError(where + ": object_count must be >= 1");
    if (j.contains("selection_seed")) {
        sc.ingest.selection_seed = j["selection_seed"].get<std::uint64_t>();
    }

    sc.split = parse_split(j, where);
    sc.tpl = parse_template(j, where);
    return sc;
}

BackendSpec parse_backend(const json& j) {
    BackendSpec spec;
    spec.name = require_string(j, "name", "backend");
    const std::string where = "backend '" + spec.name + "'";
    spec.kind = backend_kind_from_string(require_string(j, "kind", where));

    if (spec.kind == BackendKind::oracle_wrap) {
        spec.inner = backend_kind_from_string(require_string(j, "inner", where));
        if (!is_numeric_backend(spec.inner)) {
            throw ConfigError(where + ": inner must be cy, ha or clw");
        }
    }
    if (spec.kind == BackendKind::lm_service) {
        spec.endpoint = require_string(j, "endpoint", where);
    }
    if (j.contains("api_key_env")) spec.api_key_env = j["api_key_env"].get<std::string>();
    if (j.contains("max_new_tokens")) spec.max_new_tokens = j["max_new_tokens"].get<int>();
    if (j.contains("temperature")) spec.temperature = j["temperature"].get<double>();
    if (spec.temperature < 0.0) throw ConfigError(where + ": temperature must be >= 0");
    if (j.contains("concurrency_limit")) {
        spec.concurrency_limit = j["concurrency_limit"].get<int>();
    }
    if (spec.concurrency_limit < 1) throw ConfigError(where + ": concurrency_limit must be >= 1");
    if (j.contains("retry")) {
        const auto& r = j["retry"];
        if (r.contains("max_attempts")) spec.retry.max_attempts = r["max_attempts"].get<int>();
        if (r.contains("backoff_ms")) {
            spec.retry.backoff = std::chrono::milliseconds(r["backoff_ms"].get<int>());
        }
    }
    if (spec.retry.max_attempts < 1) throw ConfigError(where + ": retry.max_attempts must be >= 1");
    if (j.contains("fixed_text")) spec.fixed_text = j["fixed_text"].get<std::string>();
    return spec;
}

}  // namespace

ExperimentConfig parse_config(const std::string& json_text,
                              const std::filesystem::path& base_dir) {
    const auto j = json::parse(json_text, nullptr, false);
    if (j.is_discarded()) throw ConfigError("config is not valid JSON");

    ExperimentConfig config;
    const auto& scenarios = require(j, "scenarios", "config");
    if (!scenarios.is_array() || scenarios.empty()) {
        throw ConfigError("config: 'scenarios' must be a non-empty array");
    }
    std::set<std::string> names;
    for (const auto& s : scenarios) {
        auto sc = parse_scenario(s, base_dir);
        if (!names.insert(sc.name).second) {
            throw ConfigError("config: duplicate scenario name '" + sc.name + "'");
        }
        config.scenarios.push_back(std::move(sc));
    }

    if (j.contains("t_obs")) config.t_obs = j["t_obs"].get<int>();
    if (config.t_obs < 1) throw ConfigError("config: t_obs must be >= 1");

    if (j.contains("backends")) {
        std::set<std::string> backend_names;
        for (const auto& b : j["backends"]) {
            auto spec = parse_backend(b);
            if (!backend_names.insert(spec.name).second) {
                throw ConfigError("config: duplicate backend name '" + spec.name + "'");
            }
            config.backends.push_back(std::move(spec));
        }
    }

    if (j.contains("seeds")) {
        config.seeds = j["seeds"].get<std::vector<std::uint64_t>>();
        if (config.seeds.empty()) throw ConfigError("config: 'seeds' must be non-empty");
    }

    if (j.contains("protocol")) {
        const auto& p = j["protocol"];
        const auto mode = require_string(p, "mode", "protocol");
        if (mode == "zero_shot") {
            ZeroShotProtocol zs;
            zs.train_scenarios = require(p, "train_scenarios", "protocol")
                                     .get<std::vector<std::string>>();
            zs.test_scenario = require_string(p, "test_scenario", "protocol");
            if (zs.train_scenarios.empty()) {
                throw ConfigError("protocol: train_scenarios must be non-empty");
            }
            for (const auto& name : zs.train_scenarios) {
                find_scenario(config, name);  // must exist
                if (name == zs.test_scenario) {
                    throw ConfigError("protocol: test scenario '" + name +
                                      "' also appears in train_scenarios");
                }
            }
            find_scenario(config, zs.test_scenario);
            config.zero_shot = std::move(zs);
        } else if (mode != "standard") {
            throw ConfigError("protocol: mode must be 'standard' or 'zero_shot'");
        }
    }

    if (j.contains("output_dir")) {
        std::filesystem::path out = j["output_dir"].get<std::string>();
        config.output_dir = out.is_absolute() ? out : base_dir / out;
    } else {
        config.output_dir = base_dir / "out";
    }
    if (j.contains("decode_mode")) {
        config.decode_mode = decode_mode_from_string(j["decode_mode"].get<std::string>());
    }
    if (j.contains("prompt_separator")) {
        config.prompt_separator = j["prompt_separator"].get<std::string>();
    }
    return config;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file: " + path.string());
    std::ostringstream text;
    text << in.rdbuf();
    auto base = path.parent_path();
    if (base.empty()) base = ".";
    return parse_config(text.str(), base);
}

const ScenarioConfig& find_scenario(const ExperimentConfig& config, std::string_view name) {
    const auto it = std::find_if(config.scenarios.begin(), config.scenarios.end(),
                                 [&](const ScenarioConfig& s) { return s.name == name; });
    if (it == config.scenarios.end()) {
        throw ConfigError("unknown scenario '" + std::string(name) + "'");
    }
    return *it;
}

const BackendSpec& find_backend(const ExperimentConfig& config, std::string_view name) {
    const auto it = std::find_if(config.backends.begin(), config.backends.end(),
                                 [&](const BackendSpec& b) { return b.name == name; });
    if (it == config.backends.end()) {
        throw ConfigError("unknown backend '" + std::string(name) + "'");
    }
    return *it;
}

}  // namespace promptcast
