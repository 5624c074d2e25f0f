#include "hceval/ancestry.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <queue>
#include <unordered_map>

namespace hceval {

AncestorMap::AncestorMap(const Hierarchy& h, Index origin, std::optional<int> max_depth) : h_(&h), origin_(origin) {
  std::unordered_map<Index, int> dist{{origin, 0}};
  std::vector<Index> frontier{origin};
  int depth = 0;
  while (!frontier.empty() && (!max_depth || depth < *max_depth)) {
    std::vector<Index> next;
    for (Index node : frontier) {
      for (const auto& arc : h.parents(node)) {
        if (dist.emplace(arc.node, depth + 1).second) next.push_back(arc.node);
      }
    }
    frontier = std::move(next);
    ++depth;
  }
  entries_.assign(dist.begin(), dist.end());
  std::sort(entries_.begin(), entries_.end());
}

std::optional<int> AncestorMap::distance(Index node) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), std::make_pair(node, std::numeric_limits<int>::min()));
  if (it == entries_.end() || it->first != node) return std::nullopt;
  return it->second;
}

std::vector<std::vector<AncestorMap::Index>> AncestorMap::paths_to(Index target, std::size_t max_paths) const {
  std::vector<std::vector<Index>> out;
  const auto target_dist = distance(target);
  if (!target_dist) return out;

  // Walk from the target back down to the origin through children that sit one
  // step closer to the origin.
  std::vector<Index> reversed{target};
  const std::function<void(Index, int)> walk = [&](Index node, int d) {
    if (out.size() >= max_paths) return;
    if (d == 0) {
      out.emplace_back(reversed.rbegin(), reversed.rend());
      return;
    }
    for (const auto& arc : h_->children(node)) {
      if (distance(arc.node) == d - 1) {
        reversed.push_back(arc.node);
        walk(arc.node, d - 1);
        reversed.pop_back();
      }
    }
  };
  walk(target, *target_dist);
  std::sort(out.begin(), out.end(), [this](const auto& a, const auto& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(),
                                        [this](Index x, Index y) { return h_->id(x) < h_->id(y); });
  });
  return out;
}

CommonAncestors common_ancestors(const AncestorMap& a, const AncestorMap& b) {
  CommonAncestors out;
  const auto& ea = a.entries();
  const auto& eb = b.entries();
  auto i = ea.begin();
  auto j = eb.begin();
  while (i != ea.end() && j != eb.end()) {
    if (i->first < j->first) {
      ++i;
    } else if (j->first < i->first) {
      ++j;
    } else {
      const int cost = i->second + j->second;
      if (!out.cost || cost < *out.cost) {
        out.cost = cost;
        out.apexes.clear();
      }
      if (cost == *out.cost) out.apexes.push_back(i->first);
      ++i;
      ++j;
    }
  }
  return out;
}

std::vector<std::pair<Hierarchy::Index, double>> undirected_distances(const Hierarchy& h, Hierarchy::Index source,
                                                                      std::optional<double> cutoff) {
  using Index = Hierarchy::Index;
  constexpr double kEps = 1e-12;
  std::unordered_map<Index, double> dist{{source, 0.0}};
  std::unordered_map<Index, bool> settled;
  using Item = std::pair<double, Index>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
  queue.push({0.0, source});
  while (!queue.empty()) {
    const auto [d, node] = queue.top();
    queue.pop();
    if (!settled.emplace(node, true).second) continue;
    const auto relax = [&](const Hierarchy::Arc& arc) {
      const double nd = d + arc.weight;
      if (cutoff && nd > *cutoff + kEps) return;
      auto it = dist.find(arc.node);
      if (it == dist.end() || nd < it->second) {
        dist[arc.node] = nd;
        queue.push({nd, arc.node});
      }
    };
    for (const auto& arc : h.parents(node)) relax(arc);
    for (const auto& arc : h.children(node)) relax(arc);
  }
  std::vector<std::pair<Index, double>> out(dist.begin(), dist.end());
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<double> undirected_distances_to(const Hierarchy& h, Hierarchy::Index source,
                                            std::span<const Hierarchy::Index> targets, std::optional<double> cutoff) {
  using Index = Hierarchy::Index;
  constexpr double kInf = std::numeric_limits<double>::infinity();
  constexpr double kEps = 1e-12;
  std::vector<double> out(targets.size(), kInf);
  std::unordered_map<Index, std::vector<std::size_t>> wanted;
  for (std::size_t k = 0; k < targets.size(); ++k) wanted[targets[k]].push_back(k);
  std::size_t remaining = wanted.size();

  std::unordered_map<Index, double> dist{{source, 0.0}};
  std::unordered_map<Index, bool> settled;
  using Item = std::pair<double, Index>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
  queue.push({0.0, source});
  while (!queue.empty() && remaining > 0) {
    const auto [d, node] = queue.top();
    queue.pop();
    if (!settled.emplace(node, true).second) continue;
    if (auto it = wanted.find(node); it != wanted.end()) {
      for (std::size_t k : it->second) out[k] = d;
      --remaining;
    }
    const auto relax = [&](const Hierarchy::Arc& arc) {
      const double nd = d + arc.weight;
      if (cutoff && nd > *cutoff + kEps) return;
      auto it = dist.find(arc.node);
      if (it == dist.end() || nd < it->second) {
        dist[arc.node] = nd;
        queue.push({nd, arc.node});
      }
    };
    for (const auto& arc : h.parents(node)) relax(arc);
    for (const auto& arc : h.children(node)) relax(arc);
  }
  return out;
}

}  // namespace hceval
