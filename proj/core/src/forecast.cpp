#include "promptcast/forecast.hpp"

#include <atomic>
#include <cstdlib>
#include <iostream>
#include <mutex>
#include <numeric>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "promptcast/errors.hpp"

namespace promptcast {

namespace {

struct Endpoint {
    std::string base;  // scheme://host[:port]
    std::string path;
};

Endpoint parse_endpoint(const std::string& url) {
    const auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos) {
        throw ConfigError("lm_service endpoint '" + url + "' must start with http:// or https://");
    }
    const auto path_start = url.find('/', scheme_end + 3);
    if (path_start == std::string::npos) return {url, "/"};
    return {url.substr(0, path_start), url.substr(path_start)};
}

}  // namespace

BackendKind backend_kind_from_string(std::string_view name) {
    if (name == "cy") return BackendKind::cy;
    if (name == "ha") return BackendKind::ha;
    if (name == "clw") return BackendKind::clw;
    if (name == "lm_service") return BackendKind::lm_service;
    if (name == "oracle_wrap") return BackendKind::oracle_wrap;
    if (name == "fixed_mock") return BackendKind::fixed_mock;
    throw ConfigError("unknown backend kind '" + std::string(name) + "'");
}

std::string_view to_string(BackendKind kind) {
    switch (kind) {
        case BackendKind::cy: return "cy";
        case BackendKind::ha: return "ha";
        case BackendKind::clw: return "clw";
        case BackendKind::lm_service: return "lm_service";
        case BackendKind::oracle_wrap: return "oracle_wrap";
        case BackendKind::fixed_mock: return "fixed_mock";
    }
    return "?";
}

bool is_numeric_backend(BackendKind kind) {
    return kind == BackendKind::cy || kind == BackendKind::ha || kind == BackendKind::clw;
}

double predict_cy(const Instance& inst) {
    if (inst.window.empty()) throw DataError("predict_cy: empty observation window");
    return inst.window.back();
}

double predict_ha(const Instance& inst) {
    if (inst.window.empty()) throw DataError("predict_ha: empty observation window");
    const double sum = std::accumulate(inst.window.begin(), inst.window.end(), 0.0);
    return sum / static_cast<double>(inst.window.size());
}

double predict_clw(const Instance& inst) {
    if (inst.t_obs() < 7) {
        throw DataError("predict_clw requires t_obs >= 7, got " + std::to_string(inst.t_obs()));
    }
    // target_date - 7 days falls on window position t_obs - 7 (0-based).
    return inst.window[static_cast<std::size_t>(inst.t_obs() - 7)];
}

double predict_numeric(const Instance& inst, BackendKind kind) {
    switch (kind) {
        case BackendKind::cy: return predict_cy(inst);
        case BackendKind::ha: return predict_ha(inst);
        case BackendKind::clw: return predict_clw(inst);
        default:
            throw ConfigError("backend kind '" + std::string(to_string(kind)) +
                              "' is not a numeric baseline");
    }
}

std::string oracle_wrap(const Instance& inst, BackendKind inner, const ScenarioTemplate& tpl) {
    Instance wrapped = inst;
    wrapped.target = predict_numeric(inst, inner);
    return render_output(wrapped, tpl);
}

std::vector<std::string> lm_generate(const std::vector<std::string>& prompts,
                                     const BackendSpec& spec) {
    if (spec.concurrency_limit < 1) throw ConfigError("concurrency_limit must be >= 1");
    if (spec.temperature < 0.0) throw ConfigError("temperature must be >= 0");
    if (spec.retry.max_attempts < 1) throw ConfigError("retry max_attempts must be >= 1");

    std::vector<std::string> results(prompts.size());
    if (prompts.empty()) return results;

    const auto endpoint = parse_endpoint(spec.endpoint);
    std::string bearer;
    if (!spec.api_key_env.empty()) {
        if (const char* token = std::getenv(spec.api_key_env.c_str())) bearer = token;
    }

    std::atomic<std::size_t> next{0};
    std::atomic<std::size_t> failed{0};
    std::atomic<bool> reached{false};  // any HTTP response at all, even non-200
    std::mutex log_mutex;

    auto worker = [&] {
        httplib::Client client(endpoint.base);
        client.set_connection_timeout(std::chrono::seconds(10));
        client.set_read_timeout(std::chrono::seconds(300));
        if (!bearer.empty()) client.set_bearer_token_auth(bearer);

        for (std::size_t i = next.fetch_add(1); i < prompts.size(); i = next.fetch_add(1)) {
            const nlohmann::json body = {{"prompt", prompts[i]},
                                         {"max_new_tokens", spec.max_new_tokens},
                                         {"temperature", spec.temperature},
                                         {"seed", spec.seed}};
            const std::string payload = body.dump();

            bool done = false;
            for (int attempt = 1; attempt <= spec.retry.max_attempts && !done; ++attempt) {
                if (attempt > 1 && spec.retry.backoff.count() > 0) {
                    std::this_thread::sleep_for(spec.retry.backoff);
                }
                auto res = client.Post(endpoint.path, payload, "application/json");
                if (!res) continue;
                reached.store(true);
                if (res->status != 200) continue;
                const auto reply = nlohmann::json::parse(res->body, nullptr, false);
                if (reply.is_discarded() || !reply.contains("text") ||
                    !reply["text"].is_string()) {
                    continue;
                }
                results[i] = reply["text"].get<std::string>();
                done = true;
            }
            if (!done) {
                failed.fetch_add(1);
                std::scoped_lock lock(log_mutex);
                std::cerr << "warning: lm backend '" << spec.name << "': request " << i
                          << " failed after " << spec.retry.max_attempts
                          << " attempts, recording empty generation\n";
            }
        }
    };

    {
        const auto n_workers =
            std::min<std::size_t>(static_cast<std::size_t>(spec.concurrency_limit),
                                  prompts.size());
        std::vector<std::jthread> workers;
        workers.reserve(n_workers);
        for (std::size_t w = 0; w < n_workers; ++w) workers.emplace_back(worker);
    }

    // A server that answers, even with errors, degrades to empty generations
    // (counted by the Missing Rate); a silent endpoint fails the run.
    if (failed.load() == prompts.size() && !reached.load()) {
        throw DataError("lm backend '" + spec.name + "': endpoint " + spec.endpoint +
                        " unreachable, all " + std::to_string(prompts.size()) +
                        " requests failed");
    }
    return results;
}

}  // namespace promptcast
