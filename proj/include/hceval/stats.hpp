#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace hceval {

enum class Orientation { higher_better, lower_better };

struct ScoreSeries {
  std::string system;
  std::vector<double> scores;  // aligned to instance order
  Orientation orientation = Orientation::higher_better;

  double mean() const;
};

// Tau-b. nullopt when either sequence is constant.
std::optional<double> kendall_tau(const std::vector<double>& a, const std::vector<double>& b);

struct SignTestResult {
  std::size_t n = 0;  // instances where the two systems differ
  std::size_t k = 0;  // instances where a beats b
  double z = 0.0;
  double p_value = 1.0;  // one-sided, a better than b
  bool approximate = false;  // n <= 12 (normal approximation unreliable, or n = 0)
};

SignTestResult sign_test(const ScoreSeries& a, const ScoreSeries& b);

// Upper tail of the standard normal.
double normal_upper_tail(double z);

struct RankedSystem {
  std::size_t system = 0;  // index into the input
  std::size_t rank = 0;    // 1-based
};

// Sorted by mean (best first). A system shares the rank of the head of the
// current group when the s-test cannot separate them at alpha.
std::vector<RankedSystem> rank_with_significance(const std::vector<ScoreSeries>& systems, double alpha = 0.05);

// Average (fractional) ranks, 1 = best.
std::vector<double> ranks_by_mean(const std::vector<ScoreSeries>& systems);

}  // namespace hceval
