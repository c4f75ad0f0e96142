#pragma once

#include <chrono>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "promptcast/dataset.hpp"
#include "promptcast/prompting.hpp"

namespace promptcast {

/// cy/ha/clw are the naive numeric baselines; lm_service talks to an external
/// generation endpoint; oracle_wrap renders a numeric baseline through the
/// answer template (testing oracle); fixed_mock replies with a constant text.
enum class BackendKind { cy, ha, clw, lm_service, oracle_wrap, fixed_mock };

BackendKind backend_kind_from_string(std::string_view name);
std::string_view to_string(BackendKind kind);
bool is_numeric_backend(BackendKind kind);

struct RetryPolicy {
    int max_attempts = 3;
    std::chrono::milliseconds backoff{100};
};

struct BackendSpec {
    std::string name;
    BackendKind kind = BackendKind::cy;
    BackendKind inner = BackendKind::cy;  // oracle_wrap only
    std::string endpoint;                 // lm_service only, e.g. http://host:8080/generate
    std::string api_key_env;              // env var holding a bearer token, optional
    int max_new_tokens = 64;
    double temperature = 0.0;
    std::uint64_t seed = 0;
    int concurrency_limit = 1;
    RetryPolicy retry;
    std::string fixed_text;  // fixed_mock only
};

/// Copy Yesterday: the last observed value of the window.
double predict_cy(const Instance& inst);

/// Historical Average: the arithmetic mean of the window.
double predict_ha(const Instance& inst);

/// Copy Last Week: the window value dated target_date - 7 days
/// (position t_obs - 6, 1-based). Requires t_obs >= 7.
double predict_clw(const Instance& inst);

double predict_numeric(const Instance& inst, BackendKind kind);

/// The inner numeric prediction, rounded like serialize_values and rendered
/// through the answer pattern.
std::string oracle_wrap(const Instance& inst, BackendKind inner, const ScenarioTemplate& tpl);

/// One generated text per prompt, in prompt order, with up to
/// spec.concurrency_limit requests in flight. A request that exhausts its
/// retries yields an empty text (decoded downstream as missing) and a logged
/// warning; if every request fails, throws DataError.
///
/// Wire contract: POST {"prompt", "max_new_tokens", "temperature", "seed"}
/// as JSON to the endpoint; the reply carries {"text": "..."}.
std::vector<std::string> lm_generate(const std::vector<std::string>& prompts,
                                     const BackendSpec& spec);

}  // namespace promptcast
