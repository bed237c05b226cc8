#pragma once

#include <string>
#include <vector>

namespace netfit {

// Round-trip safe decimal form ("%.12g"); NaN prints as "nan".
std::string format_double(double x);
double parse_double(const std::string& text);

// Plain comma separation, no quoting; fields therefore must not contain
// commas (writers validate).
std::vector<std::string> split_csv(const std::string& line);
std::string join_csv(const std::vector<std::string>& fields);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace netfit
