#include "promptcast/prompting.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <set>

#include "promptcast/errors.hpp"

namespace promptcast {

namespace {

constexpr std::array<const char*, 12> kMonthNames = {
    "January", "February", "March",     "April",   "May",      "June",
    "July",    "August",   "September", "October", "November", "December"};

constexpr std::array<const char*, 7> kWeekdayNames = {
    "Sunday", "Monday", "Tuesday", "Wednesday", "Thursday", "Friday", "Saturday"};

const std::set<std::string, std::less<>> kInputPlaceholders = {"t1", "t_obs", "t_obs+1", "U_m",
                                                               "values"};

/// Replaces each {name} via `lookup`; an unmatched '{' is literal text.
/// `lookup` throws for unknown names.
std::string substitute(std::string_view pattern,
                       const std::function<std::string(std::string_view)>& lookup) {
    std::string out;
    out.reserve(pattern.size() + 64);
    std::size_t i = 0;
    while (i < pattern.size()) {
        if (pattern[i] == '{') {
            const auto close = pattern.find('}', i + 1);
            if (close != std::string_view::npos) {
                out += lookup(pattern.substr(i + 1, close - i - 1));
                i = close + 1;
                continue;
            }
        }
        out += pattern[i++];
    }
    return out;
}

void scan_placeholders(std::string_view pattern, std::string_view part,
                       const std::set<std::string, std::less<>>& allowed) {
    std::size_t i = 0;
    while (i < pattern.size()) {
        if (pattern[i] == '{') {
            const auto close = pattern.find('}', i + 1);
            if (close != std::string_view::npos) {
                const auto name = pattern.substr(i + 1, close - i - 1);
                if (!allowed.contains(name)) {
                    throw ConfigError("template " + std::string(part) +
                                      " pattern uses undeclared placeholder {" +
                                      std::string(name) + "}");
                }
                i = close + 1;
                continue;
            }
        }
        ++i;
    }
}

std::size_t count_occurrences(std::string_view pattern, std::string_view token) {
    std::size_t count = 0;
    for (auto pos = pattern.find(token); pos != std::string_view::npos;
         pos = pattern.find(token, pos + token.size())) {
        ++count;
    }
    return count;
}

std::function<std::string(std::string_view)> instance_lookup(const Instance& inst,
                                                             std::string_view part) {
    return [&inst, part](std::string_view name) -> std::string {
        if (name == "t1") return format_date(inst.window_start);
        if (name == "t_obs") return format_date(inst.window_end());
        if (name == "t_obs+1") return format_date(inst.target_date);
        if (name == "U_m") return std::to_string(inst.object_index);
        if (name == "values") return serialize_values(inst.window);
        if (name == "x_target") return std::to_string(round_half_away(inst.target));
        throw DataError("unresolved placeholder {" + std::string(name) + "} in " +
                        std::string(part) + " pattern");
    };
}

}  // namespace

ScenarioTemplate builtin_template(std::string_view name) {
    if (name == "ct") {
        return {"ct",
                "From {t1} to {t_obs}, the average temperature of region {U_m} was {values} "
                "degree on each day.",
                "What is the temperature going to be on {t_obs+1}?",
                "The temperature will be {x_target} degree."};
    }
    if (name == "ecl") {
        return {"ecl",
                "From {t1} to {t_obs}, client {U_m} consumed {values} kWh of electricity on "
                "each day.",
                "What is the consumption going to be on {t_obs+1}?",
                "This client will consume {x_target} kWh of electricity."};
    }
    if (name == "sg") {
        return {"sg",
                "From {t1} to {t_obs}, there were {values} people visiting POI {U_m} on each "
                "day.",
                "How many people will visit POI {U_m} on {t_obs+1}?",
                "There will be {x_target} visitors."};
    }
    throw ConfigError("unknown built-in template '" + std::string(name) +
                      "' (expected ct, ecl or sg)");
}

bool is_builtin_template(std::string_view name) {
    return name == "ct" || name == "ecl" || name == "sg";
}

void validate_template(const ScenarioTemplate& tpl) {
    scan_placeholders(tpl.context, "context", kInputPlaceholders);
    scan_placeholders(tpl.question, "question", kInputPlaceholders);
    scan_placeholders(tpl.answer, "answer", {"x_target"});
    if (count_occurrences(tpl.answer, "{x_target}") != 1) {
        throw ConfigError("template answer pattern must contain {x_target} exactly once");
    }
    for (const auto* pattern : {&tpl.context, &tpl.question, &tpl.answer}) {
        if (pattern->find('\n') != std::string::npos ||
            pattern->find('\r') != std::string::npos) {
            throw ConfigError("template patterns must be single-line");
        }
    }
}

std::string format_date(Date d) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%s %02u, %04d, %s", kMonthNames[d.month() - 1], d.day(),
                  d.year(), kWeekdayNames[d.weekday_index()]);
    return buf;
}

long long round_half_away(double v) { return std::llround(v); }

std::string serialize_values(std::span<const double> values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i > 0) out += ", ";
        out += std::to_string(round_half_away(values[i]));
    }
    return out;
}

std::string render_input(const Instance& inst, const ScenarioTemplate& tpl,
                         std::string_view separator) {
    std::string out = substitute(tpl.context, instance_lookup(inst, "context"));
    out += separator;
    out += substitute(tpl.question, instance_lookup(inst, "question"));
    return out;
}

std::string render_output(const Instance& inst, const ScenarioTemplate& tpl) {
    return substitute(tpl.answer, instance_lookup(inst, "answer"));
}

std::vector<PromptPair> render_prompts(const NumericalDataset& dataset,
                                       const ScenarioTemplate& tpl,
                                       std::string_view separator) {
    std::vector<PromptPair> pairs;
    pairs.reserve(dataset.instances.size());
    for (const auto& inst : dataset.instances) {
        pairs.push_back({render_input(inst, tpl, separator), render_output(inst, tpl)});
    }
    return pairs;
}

void write_prompt_files(const std::vector<PromptPair>& pairs, std::string_view split,
                        const std::filesystem::path& dir) {
    const auto x_path = dir / (std::string(split) + "_x_prompt.txt");
    const auto y_path = dir / (std::string(split) + "_y_prompt.txt");
    std::ofstream x(x_path, std::ios::binary);
    std::ofstream y(y_path, std::ios::binary);
    if (!x || !y) throw DataError("cannot write prompt files under " + dir.string());

    for (std::size_t i = 0; i < pairs.size(); ++i) {
        const auto& pair = pairs[i];
        if (pair.input.empty() || pair.output.empty() ||
            pair.input.find('\n') != std::string::npos ||
            pair.output.find('\n') != std::string::npos) {
            throw DataError("prompt pair " + std::to_string(i) +
                            " is empty or spans multiple lines");
        }
        x << pair.input << '\n';
        y << pair.output << '\n';
    }
    if (!x || !y) throw DataError("failed while writing prompt files under " + dir.string());
}

}  // namespace promptcast
