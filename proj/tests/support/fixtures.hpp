#pragma once

#include <filesystem>
#include <string>

#include "hceval/hierarchy.hpp"
#include "hceval/labels.hpp"
#include "hceval/pair_measures.hpp"

namespace hceval::testing {

inline std::filesystem::path data_dir() { return HCEVAL_TEST_DATA; }

inline std::filesystem::path case_dir(const std::string& name) { return data_dir() / "cases" / name; }

struct Fixture {
  Hierarchy h;
  InstanceLabels labels;
};

inline Fixture load_case(const std::string& name) {
  const auto dir = case_dir(name);
  Fixture f;
  f.h = load_hierarchy(dir / "hierarchy.txt");
  f.labels.truth = parse_label_lines(read_text_file(dir / "true.txt")).at(0);
  f.labels.predicted = parse_label_lines(read_text_file(dir / "pred.txt")).at(0);
  return f;
}

// Letter names used by the case fixtures.
namespace ids {
inline constexpr ClassId A = 0, B = 1, C = 2, D = 3, E = 4;
inline constexpr ClassId T1 = 10, T2 = 11, TP = 12, P1 = 20, P2 = 21;
}  // namespace ids

}  // namespace hceval::testing
