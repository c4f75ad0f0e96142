#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "promptcast/dataset.hpp"

namespace promptcast {

/// Sentence patterns for one scenario. Context and question patterns may use
/// {t1}, {t_obs}, {t_obs+1}, {U_m} and {values}; the answer pattern must use
/// {x_target} exactly once and nothing else.
struct ScenarioTemplate {
    std::string name;
    std::string context;
    std::string question;
    std::string answer;
};

/// Built-in templates: "ct", "ecl", "sg".
ScenarioTemplate builtin_template(std::string_view name);
bool is_builtin_template(std::string_view name);

/// Throws ConfigError when a pattern uses an undeclared placeholder, the
/// answer slot count is not exactly one, or a pattern spans multiple lines.
void validate_template(const ScenarioTemplate& tpl);

/// "June 07, 2021, Monday"
std::string format_date(Date d);

/// Rounds half away from zero to an integer.
long long round_half_away(double v);

/// "78, 81, 83" — values rounded half away from zero, joined by ", ".
std::string serialize_values(std::span<const double> values);

/// Context and question instantiated and joined by `separator` (one space by
/// default). Rendering is byte-exact; an unresolved placeholder raises
/// DataError naming it.
std::string render_input(const Instance& inst, const ScenarioTemplate& tpl,
                         std::string_view separator = " ");

/// Answer pattern instantiated with the rounded target value.
std::string render_output(const Instance& inst, const ScenarioTemplate& tpl);

struct PromptPair {
    std::string input;
    std::string output;
};

std::vector<PromptPair> render_prompts(const NumericalDataset& dataset,
                                       const ScenarioTemplate& tpl,
                                       std::string_view separator = " ");

/// Writes {split}_x_prompt.txt and {split}_y_prompt.txt under dir, one prompt
/// per line, line i of x aligned with line i of y. A prompt containing a
/// newline raises DataError.
void write_prompt_files(const std::vector<PromptPair>& pairs, std::string_view split,
                        const std::filesystem::path& dir);

}  // namespace promptcast
