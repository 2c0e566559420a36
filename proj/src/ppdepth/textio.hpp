#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace ppdepth {

// Shortest decimal string that parses back to exactly the same double.
std::string format_double(double v);

// Strict full-token parse; rejects trailing junk. Accepts inf/nan spellings.
std::optional<double> parse_double(std::string_view token);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, std::string_view content);

}  // namespace ppdepth
