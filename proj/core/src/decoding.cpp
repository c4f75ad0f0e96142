#include "promptcast/decoding.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>

#include "promptcast/errors.hpp"
#include "text_util.hpp"

namespace promptcast {

namespace {

using detail::iequals;
using detail::trim;

bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }

// llround is undefined outside the long long range.
constexpr double kMaxRoundable = 9.0e18;

std::optional<double> rounded_or_none(double v) {
    if (!std::isfinite(v) || std::abs(v) > kMaxRoundable) return std::nullopt;
    return static_cast<double>(std::llround(v));
}

/// The value slot must hold a plain signed decimal integer: '-'? digit+.
std::optional<double> parse_strict_slot(std::string_view slot) {
    if (slot.empty()) return std::nullopt;
    std::size_t i = 0;
    if (slot[0] == '-') i = 1;
    if (i == slot.size()) return std::nullopt;
    for (std::size_t j = i; j < slot.size(); ++j) {
        if (!is_digit(slot[j])) return std::nullopt;
    }
    long long value = 0;
    const auto [ptr, ec] = std::from_chars(slot.data(), slot.data() + slot.size(), value);
    if (ec != std::errc{} || ptr != slot.data() + slot.size()) return std::nullopt;
    return static_cast<double>(value);
}

std::optional<double> decode_strict(std::string_view text, const ScenarioTemplate& tpl) {
    const auto slot_pos = tpl.answer.find("{x_target}");
    if (slot_pos == std::string::npos) {
        throw DataError("answer pattern has no {x_target} slot");
    }
    const std::string_view prefix = std::string_view(tpl.answer).substr(0, slot_pos);
    const std::string_view suffix = std::string_view(tpl.answer).substr(slot_pos + 10);

    text = trim(text);
    if (text.size() < prefix.size() + suffix.size()) return std::nullopt;
    if (!iequals(text.substr(0, prefix.size()), prefix)) return std::nullopt;
    if (!iequals(text.substr(text.size() - suffix.size()), suffix)) return std::nullopt;
    return parse_strict_slot(
        text.substr(prefix.size(), text.size() - prefix.size() - suffix.size()));
}

std::optional<double> decode_lenient(std::string_view text) {
    const std::size_t n = text.size();
    for (std::size_t i = 0; i < n; ++i) {
        const char c = text[i];
        double sign = 1.0;
        std::size_t digits = std::string_view::npos;
        if (is_digit(c)) {
            digits = i;
        } else if (c == '-' || c == '+') {
            // Tokenizers often split the sign from its digits.
            std::size_t j = i + 1;
            while (j < n && (text[j] == ' ' || text[j] == '\t')) ++j;
            if (j < n && is_digit(text[j])) {
                sign = (c == '-') ? -1.0 : 1.0;
                digits = j;
            }
        }
        if (digits == std::string_view::npos) continue;

        std::size_t end = digits;
        while (end < n && is_digit(text[end])) ++end;
        if (end < n && text[end] == '.' && end + 1 < n && is_digit(text[end + 1])) {
            ++end;
            while (end < n && is_digit(text[end])) ++end;
        }
        double magnitude = 0.0;
        const auto [ptr, ec] = std::from_chars(text.data() + digits, text.data() + end, magnitude);
        if (ec != std::errc{} || ptr != text.data() + end) return std::nullopt;
        return rounded_or_none(sign * magnitude);
    }
    return std::nullopt;
}

}  // namespace

DecodeMode decode_mode_from_string(std::string_view name) {
    if (name == "strict") return DecodeMode::strict;
    if (name == "lenient") return DecodeMode::lenient;
    throw ConfigError("unknown decode mode '" + std::string(name) +
                      "' (expected strict or lenient)");
}

DecodedPrediction parse_output(std::string_view text, const ScenarioTemplate& tpl,
                               DecodeMode mode) {
    DecodedPrediction pred;
    pred.raw_text = std::string(text);
    pred.value = mode == DecodeMode::strict ? decode_strict(text, tpl) : decode_lenient(text);
    return pred;
}

std::vector<DecodedPrediction> batch_decode(const std::vector<std::string>& texts,
                                            const ScenarioTemplate& tpl, DecodeMode mode) {
    std::vector<DecodedPrediction> out;
    out.reserve(texts.size());
    for (const auto& text : texts) out.push_back(parse_output(text, tpl, mode));
    return out;
}

std::vector<std::string> read_lines(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open " + path.string());
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(line);
    }
    return lines;
}

}  // namespace promptcast
