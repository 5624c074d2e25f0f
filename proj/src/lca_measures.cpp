#include "hceval/lca_measures.hpp"

#include <algorithm>
#include <limits>
#include <tuple>
#include <map>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

#include "hceval/ancestry.hpp"
#include "hceval/set_measures.hpp"

namespace hceval {

namespace {

using Index = Hierarchy::Index;
using Path = std::vector<Index>;

constexpr std::size_t kMaxPathCombinations = 4096;
constexpr std::size_t kMaxTieOrderings = 120;
constexpr double kScoreEps = 1e-12;

struct Label {
  Index node = 0;
  int side = 0;  // 0 truth, 1 predicted
  std::vector<Index> lcas;
  std::vector<Index> s_best;
  std::vector<std::vector<Index>> apexes;  // parallel to s_best
};

// One decision of GetBestPaths: which minimal path, on which side, links a
// label (own path) or one of its best counterparts (cross path) to an LCA.
struct Choice {
  int side = 0;
  std::vector<Path> options;
};

class Instance {
 public:
  Instance(const Hierarchy& h, const InstanceLabels& pruned) : h_(h) {
    for (ClassId c : pruned.truth) add_label(c, 0);
    for (ClassId c : pruned.predicted) add_label(c, 1);
    for (auto& x : labels_) {
      const auto& mine = map_of(x.node);
      std::optional<int> best;
      for (const auto& z : labels_) {
        if (z.side == x.side) continue;
        const auto ca = common_ancestors(mine, map_of(z.node));
        if (!ca.cost) continue;
        if (!best || *ca.cost < *best) {
          best = ca.cost;
          x.s_best.clear();
          x.apexes.clear();
        }
        if (*ca.cost == *best) {
          x.s_best.push_back(z.node);
          x.apexes.push_back(ca.apexes);
        }
      }
      for (const auto& a : x.apexes) x.lcas.insert(x.lcas.end(), a.begin(), a.end());
      std::sort(x.lcas.begin(), x.lcas.end());
      x.lcas.erase(std::unique(x.lcas.begin(), x.lcas.end()), x.lcas.end());
      cost_.push_back(best);
    }
  }

  const std::vector<Label>& labels() const { return labels_; }
  const std::optional<int>& cost(std::size_t k) const { return cost_[k]; }

  std::vector<Index> lca_all() const {
    std::vector<Index> out;
    for (const auto& x : labels_) out.insert(out.end(), x.lcas.begin(), x.lcas.end());
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  // Own and cross decisions for LCA a of label x.
  std::vector<Choice> choices(const Label& x, Index a) const {
    std::vector<Choice> out;
    out.push_back({x.side, map_of(x.node).paths_to(a)});
    Choice cross{1 - x.side, {}};
    for (std::size_t k = 0; k < x.s_best.size(); ++k) {
      if (!std::binary_search(x.apexes[k].begin(), x.apexes[k].end(), a)) continue;
      auto more = map_of(x.s_best[k]).paths_to(a);
      cross.options.insert(cross.options.end(), more.begin(), more.end());
    }
    std::sort(cross.options.begin(), cross.options.end(), [this](const Path& p, const Path& q) { return id_less(p, q); });
    cross.options.erase(std::unique(cross.options.begin(), cross.options.end()), cross.options.end());
    out.push_back(std::move(cross));
    return out;
  }

  bool id_less(const Path& p, const Path& q) const {
    return std::lexicographical_compare(p.begin(), p.end(), q.begin(), q.end(),
                                        [this](Index a, Index b) { return h_.id(a) < h_.id(b); });
  }

  const Hierarchy& hierarchy() const { return h_; }

 private:
  void add_label(ClassId c, int side) {
    Label x;
    x.node = h_.index_of(c);
    x.side = side;
    labels_.push_back(x);
    maps_.try_emplace(x.node, h_, x.node);
  }

  const AncestorMap& map_of(Index n) const { return maps_.at(n); }

  const Hierarchy& h_;
  std::vector<Label> labels_;
  std::vector<std::optional<int>> cost_;
  std::map<Index, AncestorMap> maps_;
};

Subgraph to_subgraph(const Hierarchy& h, std::vector<Index> nodes, const std::vector<const Path*>& paths) {
  Subgraph g;
  std::vector<Edge> edges;
  for (const Path* p : paths) {
    nodes.insert(nodes.end(), p->begin(), p->end());
    for (std::size_t k = 0; k + 1 < p->size(); ++k) {
      const Index child = (*p)[k];
      const Index parent = (*p)[k + 1];
      double w = 1.0;
      for (const auto& arc : h.parents(child)) {
        if (arc.node == parent) w = arc.weight;
      }
      edges.push_back({h.id(parent), h.id(child), w});
    }
  }
  std::vector<ClassId> ids;
  ids.reserve(nodes.size());
  for (Index n : nodes) ids.push_back(h.id(n));
  g.nodes = make_class_set(std::move(ids));
  std::sort(edges.begin(), edges.end(),
            [](const Edge& a, const Edge& b) { return std::tie(a.parent, a.child) < std::tie(b.parent, b.child); });
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  g.edges = std::move(edges);
  return g;
}

struct Score {
  double f = 0.0;
  double p = 0.0;
  double r = 0.0;
  bool better_than(const Score& o) const {
    if (f > o.f + kScoreEps) return true;
    if (f < o.f - kScoreEps) return false;
    return p > o.p + kScoreEps;
  }
};

Score score_of(std::size_t t_size, std::size_t p_size, std::size_t common) {
  Score s;
  if (p_size > 0) s.p = static_cast<double>(common) / static_cast<double>(p_size);
  if (t_size > 0) s.r = static_cast<double>(common) / static_cast<double>(t_size);
  s.f = harmonic_mean(s.p, s.r);
  return s;
}

// GetBestPaths for a fixed LCA set. Paths are picked to maximise (F, P):
// exhaustively for small decision spaces, else greedily by most shared nodes
// with local refinement.
class PathSelector {
 public:
  PathSelector(const Instance& inst, const std::vector<Index>& chosen) : inst_(inst) {
    for (const auto& x : inst.labels()) {
      base_[x.side].push_back(x.node);
      for (Index a : chosen) {
        if (!std::binary_search(x.lcas.begin(), x.lcas.end(), a)) continue;
        for (auto& c : inst.choices(x, a)) {
          if (!c.options.empty()) choices_.push_back(std::move(c));
        }
      }
    }
    // Compact node ids so union sizes are cheap to recount.
    auto intern = [this](Index n) {
      return compact_.try_emplace(n, static_cast<int>(compact_.size())).first->second;
    };
    for (int s = 0; s < 2; ++s) {
      for (Index n : base_[s]) base_c_[s].push_back(intern(n));
    }
    for (const auto& c : choices_) {
      std::vector<std::vector<int>> opts;
      for (const auto& p : c.options) {
        std::vector<int> v;
        for (Index n : p) v.push_back(intern(n));
        opts.push_back(std::move(v));
      }
      options_c_.push_back(std::move(opts));
    }
  }

  std::vector<std::size_t> solve(Score& best_score) {
    std::vector<std::size_t> pick(choices_.size(), 0);
    std::size_t combos = 1;
    bool small = true;
    for (const auto& c : choices_) {
      combos *= c.options.size();
      if (combos > kMaxPathCombinations) {
        small = false;
        break;
      }
    }
    if (small) {
      std::vector<std::size_t> best = pick;
      best_score = evaluate(pick);
      for (std::size_t n = 1; n < combos; ++n) {
        for (std::size_t k = 0; k < pick.size(); ++k) {
          if (++pick[k] < choices_[k].options.size()) break;
          pick[k] = 0;
        }
        const Score s = evaluate(pick);
        if (s.better_than(best_score)) {
          best_score = s;
          best = pick;
        }
      }
      return best;
    }

    std::vector<std::vector<char>> seen(2, std::vector<char>(compact_.size(), 0));
    for (int s = 0; s < 2; ++s) {
      for (int n : base_c_[s]) seen[s][n] = 1;
    }
    for (std::size_t k = 0; k < choices_.size(); ++k) {
      const int side = choices_[k].side;
      std::size_t fewest = std::numeric_limits<std::size_t>::max();
      for (std::size_t o = 0; o < options_c_[k].size(); ++o) {
        std::size_t fresh = 0;
        for (int n : options_c_[k][o]) fresh += seen[side][n] ? 0 : 1;
        if (fresh < fewest) {
          fewest = fresh;
          pick[k] = o;
        }
      }
      for (int n : options_c_[k][pick[k]]) seen[side][n] = 1;
    }
    best_score = evaluate(pick);
    for (int pass = 0; pass < 8; ++pass) {
      bool improved = false;
      for (std::size_t k = 0; k < choices_.size(); ++k) {
        const std::size_t keep = pick[k];
        for (std::size_t o = 0; o < options_c_[k].size(); ++o) {
          if (o == keep) continue;
          pick[k] = o;
          const Score s = evaluate(pick);
          if (s.better_than(best_score)) {
            best_score = s;
            improved = true;
            break;
          }
          pick[k] = keep;
        }
      }
      if (!improved) break;
    }
    return pick;
  }

  std::pair<Subgraph, Subgraph> graphs(const std::vector<std::size_t>& pick) const {
    std::vector<const Path*> paths[2];
    for (std::size_t k = 0; k < choices_.size(); ++k) paths[choices_[k].side].push_back(&choices_[k].options[pick[k]]);
    const auto& h = inst_.hierarchy();
    return {to_subgraph(h, base_[0], paths[0]), to_subgraph(h, base_[1], paths[1])};
  }

 private:
  Score evaluate(const std::vector<std::size_t>& pick) {
    mark_[0].assign(compact_.size(), 0);
    mark_[1].assign(compact_.size(), 0);
    for (int s = 0; s < 2; ++s) {
      for (int n : base_c_[s]) mark_[s][n] = 1;
    }
    for (std::size_t k = 0; k < choices_.size(); ++k) {
      for (int n : options_c_[k][pick[k]]) mark_[choices_[k].side][n] = 1;
    }
    std::size_t t = 0, p = 0, both = 0;
    for (std::size_t n = 0; n < compact_.size(); ++n) {
      t += mark_[0][n];
      p += mark_[1][n];
      both += mark_[0][n] & mark_[1][n];
    }
    return score_of(t, p, both);
  }

  const Instance& inst_;
  std::vector<Index> base_[2];
  std::vector<int> base_c_[2];
  std::vector<Choice> choices_;
  std::vector<std::vector<std::vector<int>>> options_c_;
  std::unordered_map<Index, int> compact_;
  std::vector<char> mark_[2];
};

bool satisfied(const Instance& inst, const std::vector<Index>& chosen) {
  for (const auto& x : inst.labels()) {
    if (x.lcas.empty()) continue;
    const bool hit = std::any_of(chosen.begin(), chosen.end(),
                                 [&](Index a) { return std::binary_search(x.lcas.begin(), x.lcas.end(), a); });
    if (!hit) return false;
  }
  return true;
}

std::vector<Index> best_lcas(const Instance& inst, const std::vector<Index>& sorted) {
  std::vector<Index> chosen;
  for (Index a : sorted) {
    if (satisfied(inst, chosen)) break;
    chosen.push_back(a);
  }
  for (Index a : std::vector<Index>(chosen)) {
    std::vector<Index> without = chosen;
    std::erase(without, a);
    if (satisfied(inst, without)) chosen = std::move(without);
  }
  for (Index a : std::vector<Index>(chosen.rbegin(), chosen.rend())) {
    std::vector<Index> without = chosen;
    std::erase(without, a);
    if (satisfied(inst, without)) chosen = std::move(without);
  }
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

// Orderings of LCA_all by descending coverage. Equal-coverage groups are
// permuted in every way while the total stays small.
std::vector<std::vector<Index>> coverage_orderings(const Instance& inst) {
  std::vector<std::pair<int, Index>> cover;
  for (Index a : inst.lca_all()) {
    int n = 0;
    for (const auto& x : inst.labels()) n += std::binary_search(x.lcas.begin(), x.lcas.end(), a) ? 1 : 0;
    cover.push_back({-n, a});
  }
  std::sort(cover.begin(), cover.end());
  std::vector<std::vector<Index>> groups;
  for (std::size_t k = 0; k < cover.size(); ++k) {
    if (k == 0 || cover[k].first != cover[k - 1].first) groups.emplace_back();
    groups.back().push_back(cover[k].second);
  }
  std::size_t total = 1;
  for (const auto& g : groups) {
    for (std::size_t k = 2; k <= g.size() && total <= kMaxTieOrderings; ++k) total *= k;
  }
  std::vector<std::vector<Index>> out;
  auto flatten = [&groups]() {
    std::vector<Index> v;
    for (const auto& g : groups) v.insert(v.end(), g.begin(), g.end());
    return v;
  };
  if (total > kMaxTieOrderings) {
    out.push_back(flatten());
    return out;
  }
  // Odometer over per-group permutations.
  for (;;) {
    out.push_back(flatten());
    std::size_t g = 0;
    for (; g < groups.size(); ++g) {
      if (std::next_permutation(groups[g].begin(), groups[g].end())) break;
    }
    if (g == groups.size()) break;
  }
  return out;
}

std::vector<ClassId> to_ids(const Hierarchy& h, const std::vector<Index>& v) {
  std::vector<ClassId> out;
  for (Index n : v) out.push_back(h.id(n));
  return make_class_set(std::move(out));
}

}  // namespace

InstanceLabels prune_nested(const Hierarchy& h, const InstanceLabels& labels) {
  auto prune = [&h](const ClassSet& s) {
    ClassSet drop;
    for (ClassId c : s) {
      for (ClassId a : ancestors(h, c)) {
        if (set_contains(s, a)) drop.push_back(a);
      }
    }
    drop = make_class_set(std::move(drop));
    ClassSet kept;
    std::set_difference(s.begin(), s.end(), drop.begin(), drop.end(), std::back_inserter(kept));
    return kept;
  };
  return {prune(labels.truth), prune(labels.predicted)};
}

LcaAnalysis analyze_lcas(const Hierarchy& h, const InstanceLabels& pruned) {
  const Instance inst(h, pruned);
  LcaAnalysis out;
  for (std::size_t k = 0; k < inst.labels().size(); ++k) {
    const auto& x = inst.labels()[k];
    LabelLcas l{h.id(x.node), to_ids(h, x.s_best), to_ids(h, x.lcas), inst.cost(k)};
    (x.side == 0 ? out.truth : out.predicted).push_back(std::move(l));
  }
  out.lca_all = to_ids(h, inst.lca_all());
  return out;
}

LcaGraphs build_extended_graphs(const Hierarchy& h, const InstanceLabels& pruned) {
  const Instance inst(h, pruned);
  std::vector<Index> base[2];
  std::vector<Choice> all;
  for (const auto& x : inst.labels()) {
    base[x.side].push_back(x.node);
    for (Index a : x.lcas) {
      for (auto& c : inst.choices(x, a)) all.push_back(std::move(c));
    }
  }
  std::vector<const Path*> paths[2];
  for (const auto& c : all) {
    for (const auto& p : c.options) paths[c.side].push_back(&p);
  }
  LcaGraphs g;
  g.g_ex_t = to_subgraph(h, base[0], paths[0]);
  g.g_ex_p = to_subgraph(h, base[1], paths[1]);
  return g;
}

LcaGraphs select_minimal_graphs(const Hierarchy& h, const InstanceLabels& pruned, LcaGraphs extended) {
  const Instance inst(h, pruned);
  std::vector<std::vector<Index>> candidates;
  for (const auto& order : coverage_orderings(inst)) {
    auto chosen = best_lcas(inst, order);
    if (std::find(candidates.begin(), candidates.end(), chosen) == candidates.end()) candidates.push_back(chosen);
  }
  if (candidates.empty()) candidates.emplace_back();

  bool first = true;
  Score best;
  for (const auto& chosen : candidates) {
    PathSelector sel(inst, chosen);
    Score s;
    const auto pick = sel.solve(s);
    if (first || s.better_than(best)) {
      first = false;
      best = s;
      auto [gt, gp] = sel.graphs(pick);
      extended.g_t = std::move(gt);
      extended.g_p = std::move(gp);
      extended.chosen_lcas = to_ids(h, chosen);
    }
  }
  return extended;
}

LcaScore lca_scores(const Subgraph& g_t, const Subgraph& g_p) {
  const auto s = score_of(g_t.nodes.size(), g_p.nodes.size(), intersection_size(g_t.nodes, g_p.nodes));
  return {s.p, s.r, s.f};
}

LcaGraphs lca_graphs(const Hierarchy& h, const InstanceLabels& labels) {
  const auto pruned = prune_nested(h, labels);
  return select_minimal_graphs(h, pruned, build_extended_graphs(h, pruned));
}

LocalHierarchy apply_lca_threshold(const Hierarchy& h, const InstanceLabels& labels, int t) {
  if (t < 1) throw std::invalid_argument("LCA threshold must be at least 1");
  std::vector<AncestorMap> truth, predicted;
  for (ClassId c : labels.truth) truth.emplace_back(h, h.index_of(c), t);
  for (ClassId c : labels.predicted) predicted.emplace_back(h, h.index_of(c), t);

  bool isolated = false;
  if (!truth.empty() && !predicted.empty()) {
    auto has_partner = [](const AncestorMap& x, const std::vector<AncestorMap>& others) {
      return std::any_of(others.begin(), others.end(),
                         [&](const AncestorMap& z) { return common_ancestors(x, z).cost.has_value(); });
    };
    for (const auto& x : truth) isolated = isolated || !has_partner(x, predicted);
    for (const auto& x : predicted) isolated = isolated || !has_partner(x, truth);
  }

  const int depth = isolated ? t - 1 : t;
  std::vector<Index> keep;
  for (const auto* side : {&truth, &predicted}) {
    for (const auto& m : *side) {
      for (const auto& [n, d] : m.entries()) {
        if (d <= depth) keep.push_back(n);
      }
    }
  }
  std::sort(keep.begin(), keep.end());
  keep.erase(std::unique(keep.begin(), keep.end()), keep.end());

  std::vector<Edge> edges;
  std::vector<ClassId> nodes;
  std::vector<ClassId> local_roots;
  for (Index n : keep) {
    nodes.push_back(h.id(n));
    bool rooted = true;
    for (const auto& arc : h.parents(n)) {
      if (std::binary_search(keep.begin(), keep.end(), arc.node)) {
        edges.push_back({h.id(arc.node), h.id(n), arc.weight});
        rooted = false;
      }
    }
    if (rooted) local_roots.push_back(h.id(n));
  }
  LocalHierarchy out;
  out.artificial = isolated;
  if (isolated) {
    for (ClassId r : local_roots) edges.push_back({kArtificialRoot, r, 1.0});
  }
  out.hierarchy = Hierarchy::from_edges(edges, nodes);
  return out;
}

}  // namespace hceval
