#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace cphmm {

/// Shortest decimal text that parses back to the identical double.
std::string format_double(double value);

/// Strict decimal parse; the whole field (modulo surrounding blanks) must be
/// consumed. Throws Error{ParseError}.
double parse_double(std::string_view text);
long long parse_integer(std::string_view text);

/// Splits on `sep`, keeping empty fields.
std::vector<std::string_view> split(std::string_view line, char sep);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace cphmm
