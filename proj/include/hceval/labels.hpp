#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "hceval/hierarchy.hpp"

namespace hceval {

// One instance per line, whitespace-separated class ids. A blank line is an
// empty label set. Throws ParseError with the 1-based line number.
std::vector<ClassSet> parse_label_lines(std::string_view text);

std::string read_text_file(const std::filesystem::path& path);

// Lines of text without their terminators; a final newline adds no line.
std::vector<std::string_view> split_lines(std::string_view text);

}  // namespace hceval
