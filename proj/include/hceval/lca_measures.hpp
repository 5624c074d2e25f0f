#pragma once

#include <optional>
#include <vector>

#include "hceval/hierarchy.hpp"
#include "hceval/pair_measures.hpp"

namespace hceval {

// Id of the per-instance node added by apply_lca_threshold.
inline constexpr ClassId kArtificialRoot = -1;

struct Subgraph {
  ClassSet nodes;
  std::vector<Edge> edges;  // parent -> child, sorted
};

struct LabelLcas {
  ClassId label = 0;
  ClassSet s_best;
  ClassSet lcas;
  std::optional<int> cost;
};

// LCA(x, other side) and S_best(x, other side) for every label.
struct LcaAnalysis {
  std::vector<LabelLcas> truth;
  std::vector<LabelLcas> predicted;
  ClassSet lca_all;
};

struct LcaGraphs {
  Subgraph g_ex_t;
  Subgraph g_ex_p;
  Subgraph g_t;
  Subgraph g_p;
  ClassSet chosen_lcas;
};

struct LcaScore {
  double p_lca = 0.0;
  double r_lca = 0.0;
  double f_lca = 0.0;
};

// Drops every label that has a descendant in the same set.
InstanceLabels prune_nested(const Hierarchy& h, const InstanceLabels& labels);

LcaAnalysis analyze_lcas(const Hierarchy& h, const InstanceLabels& pruned);

// Fills g_ex_t and g_ex_p. Labels are expected to be pruned.
LcaGraphs build_extended_graphs(const Hierarchy& h, const InstanceLabels& pruned);

// Greedy LCA selection followed by path selection; fills g_t, g_p and
// chosen_lcas while keeping the extended part.
LcaGraphs select_minimal_graphs(const Hierarchy& h, const InstanceLabels& pruned, LcaGraphs extended);

LcaScore lca_scores(const Subgraph& g_t, const Subgraph& g_p);
inline LcaScore lca_scores(const LcaGraphs& g) { return lca_scores(g.g_t, g.g_p); }

// prune_nested, build_extended_graphs and select_minimal_graphs in one call.
LcaGraphs lca_graphs(const Hierarchy& h, const InstanceLabels& labels);

struct LocalHierarchy {
  Hierarchy hierarchy;
  bool artificial = false;  // kArtificialRoot was added
};

// Restricts the instance to the labels and their nearby ancestors. When some
// label has no counterpart sharing an ancestor within t upward steps, the
// ancestors are cut at depth t - 1 and an artificial root joins what is left.
LocalHierarchy apply_lca_threshold(const Hierarchy& h, const InstanceLabels& labels, int t);

}  // namespace hceval
