#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace hceval {

// Class identifiers as they appear in hierarchy and label files. File ids are
// non-negative; negative ids are reserved for nodes synthesised at runtime.
using ClassId = std::int64_t;

// Sorted, duplicate-free set of class ids.
using ClassSet = std::vector<ClassId>;

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class UnknownClassError : public std::out_of_range {
 public:
  explicit UnknownClassError(ClassId id)
      : std::out_of_range("unknown class id " + std::to_string(id)), id_(id) {}
  ClassId id() const noexcept { return id_; }

 private:
  ClassId id_;
};

class UnreachableError : public std::runtime_error {
 public:
  UnreachableError(ClassId a, ClassId b)
      : std::runtime_error("classes " + std::to_string(a) + " and " + std::to_string(b) +
                           " are not connected") {}
};

struct Edge {
  ClassId parent = 0;
  ClassId child = 0;
  double weight = 1.0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

// Immutable class taxonomy. Nodes are stored densely in ascending id order;
// parent and child adjacency use CSR arrays sorted by neighbour id.
class Hierarchy {
 public:
  using Index = std::int32_t;

  struct Arc {
    Index node;
    double weight;
  };

  Hierarchy() = default;

  // Duplicate (parent, child) pairs with equal weight are merged. Throws
  // std::invalid_argument on self-edges, non-positive weights or conflicting
  // duplicates.
  static Hierarchy from_edges(std::span<const Edge> edges, std::span<const ClassId> extra_nodes = {});

  std::size_t size() const noexcept { return ids_.size(); }
  std::size_t edge_count() const noexcept { return parent_arcs_.size(); }

  bool contains(ClassId id) const noexcept { return find(id).has_value(); }
  std::optional<Index> find(ClassId id) const noexcept;
  Index index_of(ClassId id) const;  // throws UnknownClassError
  ClassId id(Index i) const { return ids_[static_cast<std::size_t>(i)]; }
  const std::vector<ClassId>& ids() const noexcept { return ids_; }

  std::span<const Arc> parents(Index i) const;
  std::span<const Arc> children(Index i) const;

  ClassSet roots() const;
  std::vector<Edge> edges() const;
  bool unit_weights() const noexcept { return unit_weights_; }

  // Kahn order over parent->child edges; nullopt when a cycle exists.
  std::optional<std::vector<Index>> topological_order() const;
  bool is_acyclic() const { return topological_order().has_value(); }

 private:
  std::vector<ClassId> ids_;
  std::vector<std::size_t> parent_offsets_;
  std::vector<Arc> parent_arcs_;
  std::vector<std::size_t> child_offsets_;
  std::vector<Arc> child_arcs_;
  bool unit_weights_ = true;
};

// Line-oriented "parent child [weight]" text; '#' starts a comment line.
Hierarchy parse_hierarchy(std::string_view text);
Hierarchy load_hierarchy(const std::filesystem::path& path);

struct NormalizedHierarchy {
  Hierarchy dag;
  std::vector<Edge> removed;
};

// Removes DFS back edges. Traversal starts from in-degree-0 nodes in ascending
// id order, then from the lowest unvisited id until every node is reached;
// children are visited in ascending id order.
NormalizedHierarchy normalize_to_dag(const Hierarchy& h);

ClassSet ancestors(const Hierarchy& h, ClassId n);
ClassSet descendants(const Hierarchy& h, ClassId n);

struct PathSet {
  enum class Status { ok, exceeds_cap, unreachable };

  ClassId from = 0;
  ClassId to = 0;
  Status status = Status::ok;
  double cost = 0.0;
  std::vector<std::vector<ClassId>> paths;
  bool truncated = false;  // more minimal paths exist than max_paths
};

// Minimal-cost paths over undirected hierarchy edges (weighted).
PathSet shortest_paths(const Hierarchy& h, ClassId a, ClassId b, std::optional<double> cap = std::nullopt,
                       std::size_t max_paths = 256);

// Lowest common ancestors of a and b: apexes of the cheapest connections that
// climb from both endpoints to a shared ancestor-or-self (unit edges). Throws
// UnreachableError when no common ancestor exists.
ClassSet lca_pair(const Hierarchy& h, ClassId a, ClassId b);

// Cost of the connections used by lca_pair; nullopt when unreachable.
std::optional<int> lca_distance(const Hierarchy& h, ClassId a, ClassId b);

struct LcaResult {
  ClassId query = 0;
  ClassSet candidates;
  ClassSet s_best;
  ClassSet lcas;
  std::optional<int> cost;  // nullopt when no candidate is connected
};

LcaResult lca_of_set(const Hierarchy& h, ClassId n, const ClassSet& s);

// Set helpers.
ClassSet make_class_set(std::vector<ClassId> ids);
std::size_t intersection_size(const ClassSet& a, const ClassSet& b);
ClassSet set_union(const ClassSet& a, const ClassSet& b);
bool set_contains(const ClassSet& s, ClassId id);

}  // namespace hceval
