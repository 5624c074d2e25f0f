#include "hceval/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace hceval {

double ScoreSeries::mean() const {
  if (scores.empty()) return 0.0;
  return std::accumulate(scores.begin(), scores.end(), 0.0) / static_cast<double>(scores.size());
}

std::optional<double> kendall_tau(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw std::invalid_argument("rank sequences differ in length");
  if (a.size() < 2) throw std::invalid_argument("need at least two ranked items");
  long long concordant = 0, discordant = 0, ties_a = 0, ties_b = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = i + 1; j < a.size(); ++j) {
      const double da = a[i] - a[j];
      const double db = b[i] - b[j];
      if (da == 0.0 && db == 0.0) continue;
      if (da == 0.0) {
        ++ties_a;
      } else if (db == 0.0) {
        ++ties_b;
      } else if ((da > 0.0) == (db > 0.0)) {
        ++concordant;
      } else {
        ++discordant;
      }
    }
  }
  const double left = static_cast<double>(concordant + discordant + ties_a);
  const double right = static_cast<double>(concordant + discordant + ties_b);
  if (left == 0.0 || right == 0.0) return std::nullopt;
  return static_cast<double>(concordant - discordant) / std::sqrt(left * right);
}

double normal_upper_tail(double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); }

SignTestResult sign_test(const ScoreSeries& a, const ScoreSeries& b) {
  if (a.scores.size() != b.scores.size()) throw std::invalid_argument("score series are not aligned");
  if (a.orientation != b.orientation) throw std::invalid_argument("score series disagree on orientation");
  SignTestResult r;
  for (std::size_t i = 0; i < a.scores.size(); ++i) {
    const double x = a.scores[i];
    const double y = b.scores[i];
    if (x == y) continue;
    ++r.n;
    const bool a_wins = a.orientation == Orientation::higher_better ? x > y : x < y;
    if (a_wins) ++r.k;
  }
  r.approximate = r.n <= 12;
  if (r.n == 0) return r;
  const double n = static_cast<double>(r.n);
  r.z = (static_cast<double>(r.k) - 0.5 * n) / (0.5 * std::sqrt(n));
  r.p_value = normal_upper_tail(r.z);
  return r;
}

namespace {

std::vector<std::size_t> order_by_mean(const std::vector<ScoreSeries>& systems) {
  std::vector<double> means;
  for (const auto& s : systems) means.push_back(s.mean());
  std::vector<std::size_t> order(systems.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return systems[x].orientation == Orientation::higher_better ? means[x] > means[y] : means[x] < means[y];
  });
  return order;
}

}  // namespace

std::vector<RankedSystem> rank_with_significance(const std::vector<ScoreSeries>& systems, double alpha) {
  const auto order = order_by_mean(systems);
  std::vector<RankedSystem> out;
  std::size_t head = 0;
  std::size_t head_rank = 1;
  for (std::size_t pos = 0; pos < order.size(); ++pos) {
    const std::size_t s = order[pos];
    if (pos == 0) {
      out.push_back({s, 1});
      head = s;
      continue;
    }
    const auto test = sign_test(systems[head], systems[s]);
    if (test.p_value >= alpha) {
      out.push_back({s, head_rank});
    } else {
      head = s;
      head_rank = pos + 1;
      out.push_back({s, head_rank});
    }
  }
  return out;
}

std::vector<double> ranks_by_mean(const std::vector<ScoreSeries>& systems) {
  const auto order = order_by_mean(systems);
  std::vector<double> ranks(systems.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && systems[order[j + 1]].mean() == systems[order[i]].mean()) ++j;
    const double r = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r;
    i = j + 1;
  }
  return ranks;
}

}  // namespace hceval
