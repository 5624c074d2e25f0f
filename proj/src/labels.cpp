#include "hceval/labels.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace hceval {

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    out.push_back(line);
    start = end + 1;
  }
  return out;
}

std::vector<ClassSet> parse_label_lines(std::string_view text) {
  std::vector<ClassSet> out;
  const auto lines = split_lines(text);
  out.reserve(lines.size());
  for (std::size_t n = 0; n < lines.size(); ++n) {
    const std::string_view line = lines[n];
    std::vector<ClassId> ids;
    std::size_t i = 0;
    while (i < line.size()) {
      while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
      if (i >= line.size()) break;
      std::size_t j = i;
      while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
      ClassId id = 0;
      const auto [ptr, ec] = std::from_chars(line.data() + i, line.data() + j, id);
      if (ec != std::errc() || ptr != line.data() + j || id < 0) {
        throw ParseError(n + 1, "bad class id '" + std::string(line.substr(i, j - i)) + "'");
      }
      ids.push_back(id);
      i = j;
    }
    out.push_back(make_class_set(std::move(ids)));
  }
  return out;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace hceval
