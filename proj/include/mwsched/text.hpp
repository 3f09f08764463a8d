#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace mwsched {

// Shortest decimal text that parses back to exactly `v`.
std::string format_double(double v);
// Strict full-string parse; false on any trailing garbage.
bool parse_double(std::string_view text, double& out);

std::vector<std::string_view> split(std::string_view text, char sep);
std::string_view trim(std::string_view s);

} // namespace mwsched
