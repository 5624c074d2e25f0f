#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "hceval/hierarchy.hpp"

namespace hceval {

// Upward hop distances from one node to each of its ancestors (the node itself
// at distance 0), optionally truncated at max_depth.
class AncestorMap {
 public:
  using Index = Hierarchy::Index;

  AncestorMap(const Hierarchy& h, Index origin, std::optional<int> max_depth = std::nullopt);

  Index origin() const noexcept { return origin_; }
  std::optional<int> distance(Index node) const;
  // Sorted by node index.
  const std::vector<std::pair<Index, int>>& entries() const noexcept { return entries_; }

  // Every shortest upward path origin -> target, origin first. Paths are
  // produced in lexicographic order of node ids and capped at max_paths.
  std::vector<std::vector<Index>> paths_to(Index target, std::size_t max_paths = 256) const;

 private:
  const Hierarchy* h_;
  Index origin_;
  std::vector<std::pair<Index, int>> entries_;
};

// Cheapest connections through a shared ancestor-or-self.
struct CommonAncestors {
  std::optional<int> cost;
  std::vector<Hierarchy::Index> apexes;  // ascending index
};

CommonAncestors common_ancestors(const AncestorMap& a, const AncestorMap& b);

// Weighted distances over undirected edges, stopping beyond cutoff.
// Returned pairs are sorted by node index.
std::vector<std::pair<Hierarchy::Index, double>> undirected_distances(const Hierarchy& h, Hierarchy::Index source,
                                                                      std::optional<double> cutoff);

// Distances from source to each of targets (infinity when unreached within
// cutoff). Stops once every target is settled.
std::vector<double> undirected_distances_to(const Hierarchy& h, Hierarchy::Index source,
                                            std::span<const Hierarchy::Index> targets, std::optional<double> cutoff);

}  // namespace hceval
