#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "promptcast/prompting.hpp"

namespace promptcast {

/// strict: the text must instantiate the answer pattern with a signed decimal
/// integer in the value slot (fixed words compared case-insensitively,
/// surrounding whitespace ignored). lenient: the first signed decimal number
/// anywhere in the text wins; fractions are rounded half away from zero and a
/// sign separated from its digits by spaces is honored.
enum class DecodeMode { strict, lenient };

DecodeMode decode_mode_from_string(std::string_view name);

/// Outcome of decoding one generated sentence. Undecodable outputs keep
/// their raw text and carry no value; they are data, not errors.
struct DecodedPrediction {
    std::optional<double> value;
    std::string raw_text;

    bool decoded() const { return value.has_value(); }
};

DecodedPrediction parse_output(std::string_view text, const ScenarioTemplate& tpl,
                               DecodeMode mode);

/// Decodes in order; output size always equals input size.
std::vector<DecodedPrediction> batch_decode(const std::vector<std::string>& texts,
                                            const ScenarioTemplate& tpl, DecodeMode mode);

/// Reads a generation or prediction file, one entry per line.
std::vector<std::string> read_lines(const std::filesystem::path& path);

}  // namespace promptcast
