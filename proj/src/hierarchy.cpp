#include "hceval/hierarchy.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <queue>
#include <sstream>
#include <system_error>
#include <unordered_map>

#include "hceval/ancestry.hpp"

namespace hceval {

namespace {

using Index = Hierarchy::Index;

void build_csr(std::size_t n, const std::vector<std::pair<Index, Hierarchy::Arc>>& items,
               std::vector<std::size_t>& offsets, std::vector<Hierarchy::Arc>& arcs) {
  offsets.assign(n + 1, 0);
  for (const auto& [owner, arc] : items) ++offsets[static_cast<std::size_t>(owner) + 1];
  for (std::size_t i = 0; i < n; ++i) offsets[i + 1] += offsets[i];
  arcs.resize(items.size());
  std::vector<std::size_t> cursor(offsets.begin(), offsets.end() - 1);
  for (const auto& [owner, arc] : items) arcs[cursor[static_cast<std::size_t>(owner)]++] = arc;
  for (std::size_t i = 0; i < n; ++i) {
    std::sort(arcs.begin() + static_cast<std::ptrdiff_t>(offsets[i]),
              arcs.begin() + static_cast<std::ptrdiff_t>(offsets[i + 1]),
              [](const Hierarchy::Arc& a, const Hierarchy::Arc& b) { return a.node < b.node; });
  }
}

std::string_view trim(std::string_view s) {
  const auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; };
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

std::optional<ClassId> parse_id(std::string_view field) {
  std::uint64_t value = 0;
  const auto* end = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(field.data(), end, value);
  if (ec != std::errc() || ptr != end) return std::nullopt;
  if (value > static_cast<std::uint64_t>(std::numeric_limits<ClassId>::max())) return std::nullopt;
  return static_cast<ClassId>(value);
}

std::optional<double> parse_weight(std::string_view field) {
  double value = 0.0;
  const auto* end = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(field.data(), end, value, std::chars_format::fixed | std::chars_format::scientific);
  if (ec != std::errc() || ptr != end || !std::isfinite(value)) return std::nullopt;
  return value;
}

}  // namespace

Hierarchy Hierarchy::from_edges(std::span<const Edge> edges, std::span<const ClassId> extra_nodes) {
  std::map<std::pair<ClassId, ClassId>, double> unique;
  for (const Edge& e : edges) {
    if (e.parent == e.child) throw std::invalid_argument("self-edge on class " + std::to_string(e.parent));
    if (!(e.weight > 0.0) || !std::isfinite(e.weight)) {
      throw std::invalid_argument("non-positive weight on edge " + std::to_string(e.parent) + " -> " +
                                  std::to_string(e.child));
    }
    auto [it, inserted] = unique.emplace(std::make_pair(e.parent, e.child), e.weight);
    if (!inserted && it->second != e.weight) {
      throw std::invalid_argument("conflicting weights on edge " + std::to_string(e.parent) + " -> " +
                                  std::to_string(e.child));
    }
  }

  Hierarchy h;
  h.ids_.reserve(unique.size() + extra_nodes.size());
  for (const auto& [key, w] : unique) {
    h.ids_.push_back(key.first);
    h.ids_.push_back(key.second);
  }
  h.ids_.insert(h.ids_.end(), extra_nodes.begin(), extra_nodes.end());
  std::sort(h.ids_.begin(), h.ids_.end());
  h.ids_.erase(std::unique(h.ids_.begin(), h.ids_.end()), h.ids_.end());

  std::vector<std::pair<Index, Arc>> up;
  std::vector<std::pair<Index, Arc>> down;
  up.reserve(unique.size());
  down.reserve(unique.size());
  for (const auto& [key, w] : unique) {
    const Index p = h.index_of(key.first);
    const Index c = h.index_of(key.second);
    up.push_back({c, Arc{p, w}});
    down.push_back({p, Arc{c, w}});
    if (w != 1.0) h.unit_weights_ = false;
  }
  build_csr(h.ids_.size(), up, h.parent_offsets_, h.parent_arcs_);
  build_csr(h.ids_.size(), down, h.child_offsets_, h.child_arcs_);
  return h;
}

std::optional<Hierarchy::Index> Hierarchy::find(ClassId id) const noexcept {
  auto it = std::lower_bound(ids_.begin(), ids_.end(), id);
  if (it == ids_.end() || *it != id) return std::nullopt;
  return static_cast<Index>(it - ids_.begin());
}

Hierarchy::Index Hierarchy::index_of(ClassId id) const {
  if (auto i = find(id)) return *i;
  throw UnknownClassError(id);
}

std::span<const Hierarchy::Arc> Hierarchy::parents(Index i) const {
  const auto k = static_cast<std::size_t>(i);
  return {parent_arcs_.data() + parent_offsets_[k], parent_offsets_[k + 1] - parent_offsets_[k]};
}

std::span<const Hierarchy::Arc> Hierarchy::children(Index i) const {
  const auto k = static_cast<std::size_t>(i);
  return {child_arcs_.data() + child_offsets_[k], child_offsets_[k + 1] - child_offsets_[k]};
}

ClassSet Hierarchy::roots() const {
  ClassSet out;
  for (std::size_t i = 0; i < ids_.size(); ++i) {
    if (parents(static_cast<Index>(i)).empty()) out.push_back(ids_[i]);
  }
  return out;
}

std::vector<Edge> Hierarchy::edges() const {
  std::vector<Edge> out;
  out.reserve(edge_count());
  for (std::size_t p = 0; p < ids_.size(); ++p) {
    for (const Arc& a : children(static_cast<Index>(p))) out.push_back({ids_[p], id(a.node), a.weight});
  }
  return out;
}

std::optional<std::vector<Hierarchy::Index>> Hierarchy::topological_order() const {
  const std::size_t n = size();
  std::vector<std::size_t> indegree(n);
  for (std::size_t i = 0; i < n; ++i) indegree[i] = parents(static_cast<Index>(i)).size();
  std::vector<Index> order;
  order.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (indegree[i] == 0) order.push_back(static_cast<Index>(i));
  }
  for (std::size_t head = 0; head < order.size(); ++head) {
    for (const Arc& a : children(order[head])) {
      if (--indegree[static_cast<std::size_t>(a.node)] == 0) order.push_back(a.node);
    }
  }
  if (order.size() != n) return std::nullopt;
  return order;
}

Hierarchy parse_hierarchy(std::string_view text) {
  std::vector<Edge> edges;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;

    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    const auto fields = split_fields(line);
    if (fields.size() < 2 || fields.size() > 3) {
      throw ParseError(line_no, "expected \"parent child [weight]\"");
    }
    const auto parent = parse_id(fields[0]);
    const auto child = parse_id(fields[1]);
    if (!parent || !child) throw ParseError(line_no, "class ids must be unsigned base-10 integers");
    double weight = 1.0;
    if (fields.size() == 3) {
      const auto w = parse_weight(fields[2]);
      if (!w) throw ParseError(line_no, "malformed weight");
      if (*w <= 0.0) throw ParseError(line_no, "weight must be positive");
      weight = *w;
    }
    if (*parent == *child) throw ParseError(line_no, "self-edge on class " + std::to_string(*parent));
    edges.push_back({*parent, *child, weight});
  }
  try {
    return Hierarchy::from_edges(edges);
  } catch (const std::invalid_argument& e) {
    throw ParseError(line_no, e.what());
  }
}

Hierarchy load_hierarchy(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open hierarchy file " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_hierarchy(buffer.str());
}

NormalizedHierarchy normalize_to_dag(const Hierarchy& h) {
  enum class Mark : std::uint8_t { unseen, active, done };
  const std::size_t n = h.size();
  std::vector<Mark> mark(n, Mark::unseen);
  std::vector<std::pair<Index, Index>> back_edges;

  const auto dfs = [&](Index start) {
    // Iterative DFS; frame = (node, next child position).
    std::vector<std::pair<Index, std::size_t>> stack;
    mark[static_cast<std::size_t>(start)] = Mark::active;
    stack.push_back({start, 0});
    while (!stack.empty()) {
      auto& [node, pos] = stack.back();
      const auto kids = h.children(node);
      if (pos == kids.size()) {
        mark[static_cast<std::size_t>(node)] = Mark::done;
        stack.pop_back();
        continue;
      }
      const Index next = kids[pos++].node;
      const Index from = node;
      switch (mark[static_cast<std::size_t>(next)]) {
        case Mark::active:
          back_edges.push_back({from, next});
          break;
        case Mark::unseen:
          mark[static_cast<std::size_t>(next)] = Mark::active;
          stack.push_back({next, 0});
          break;
        case Mark::done:
          break;
      }
    }
  };

  for (std::size_t i = 0; i < n; ++i) {
    if (h.parents(static_cast<Index>(i)).empty()) dfs(static_cast<Index>(i));
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (mark[i] == Mark::unseen) dfs(static_cast<Index>(i));
  }

  std::sort(back_edges.begin(), back_edges.end());
  NormalizedHierarchy out;
  std::vector<Edge> kept;
  for (const Edge& e : h.edges()) {
    const std::pair<Index, Index> key{h.index_of(e.parent), h.index_of(e.child)};
    if (std::binary_search(back_edges.begin(), back_edges.end(), key)) {
      out.removed.push_back(e);
    } else {
      kept.push_back(e);
    }
  }
  out.dag = Hierarchy::from_edges(kept, h.ids());
  return out;
}

namespace {

ClassSet closure(const Hierarchy& h, ClassId n, bool upward) {
  const Index start = h.index_of(n);
  std::vector<Index> stack{start};
  std::vector<Index> seen{start};
  std::unordered_map<Index, bool> visited{{start, true}};
  while (!stack.empty()) {
    const Index cur = stack.back();
    stack.pop_back();
    for (const auto& arc : upward ? h.parents(cur) : h.children(cur)) {
      if (visited.emplace(arc.node, true).second) {
        stack.push_back(arc.node);
        seen.push_back(arc.node);
      }
    }
  }
  ClassSet out;
  out.reserve(seen.size() - 1);
  for (Index i : seen) {
    if (i != start) out.push_back(h.id(i));
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

ClassSet ancestors(const Hierarchy& h, ClassId n) { return closure(h, n, true); }
ClassSet descendants(const Hierarchy& h, ClassId n) { return closure(h, n, false); }

PathSet shortest_paths(const Hierarchy& h, ClassId a, ClassId b, std::optional<double> cap, std::size_t max_paths) {
  const Index src = h.index_of(a);
  const Index dst = h.index_of(b);
  PathSet out;
  out.from = a;
  out.to = b;

  // Dijkstra with predecessor lists, frontier cut at the cap.
  std::unordered_map<Index, double> dist{{src, 0.0}};
  std::unordered_map<Index, std::vector<Index>> preds;
  using Item = std::pair<double, Index>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
  queue.push({0.0, src});
  constexpr double kEps = 1e-12;
  double best = std::numeric_limits<double>::infinity();
  while (!queue.empty()) {
    const auto [d, node] = queue.top();
    queue.pop();
    if (d > dist[node] + kEps) continue;
    if (d > best + kEps) break;
    if (node == dst) {
      best = d;
      continue;
    }
    const auto relax = [&](const Hierarchy::Arc& arc) {
      const double nd = d + arc.weight;
      if (cap && nd > *cap + kEps) return;
      auto it = dist.find(arc.node);
      if (it == dist.end() || nd < it->second - kEps) {
        dist[arc.node] = nd;
        preds[arc.node] = {node};
        queue.push({nd, arc.node});
      } else if (std::abs(nd - it->second) <= kEps) {
        preds[arc.node].push_back(node);
      }
    };
    for (const auto& arc : h.parents(node)) relax(arc);
    for (const auto& arc : h.children(node)) relax(arc);
  }

  if (!dist.contains(dst)) {
    if (cap) {
      out.status = PathSet::Status::exceeds_cap;
    } else {
      out.status = PathSet::Status::unreachable;
    }
    return out;
  }
  out.cost = dist[dst];

  // Walk predecessor lists back from dst; emit paths in id order.
  for (auto& [node, list] : preds) {
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
  }
  std::vector<Index> reversed{dst};
  const std::function<void(Index)> walk = [&](Index node) {
    if (out.paths.size() >= max_paths) {
      out.truncated = true;
      return;
    }
    if (node == src) {
      std::vector<ClassId> path;
      for (auto it = reversed.rbegin(); it != reversed.rend(); ++it) path.push_back(h.id(*it));
      out.paths.push_back(std::move(path));
      return;
    }
    for (Index p : preds[node]) {
      reversed.push_back(p);
      walk(p);
      reversed.pop_back();
    }
  };
  walk(dst);
  std::sort(out.paths.begin(), out.paths.end());
  return out;
}

ClassSet lca_pair(const Hierarchy& h, ClassId a, ClassId b) {
  const AncestorMap ma(h, h.index_of(a));
  const AncestorMap mb(h, h.index_of(b));
  const auto common = common_ancestors(ma, mb);
  if (!common.cost) throw UnreachableError(a, b);
  ClassSet out;
  for (Index i : common.apexes) out.push_back(h.id(i));
  return make_class_set(std::move(out));
}

std::optional<int> lca_distance(const Hierarchy& h, ClassId a, ClassId b) {
  const AncestorMap ma(h, h.index_of(a));
  const AncestorMap mb(h, h.index_of(b));
  return common_ancestors(ma, mb).cost;
}

LcaResult lca_of_set(const Hierarchy& h, ClassId n, const ClassSet& s) {
  if (s.empty()) throw std::invalid_argument("lca_of_set needs a nonempty set");
  LcaResult out;
  out.query = n;
  out.candidates = make_class_set(s);
  const AncestorMap origin(h, h.index_of(n));
  std::vector<std::pair<ClassId, CommonAncestors>> per_member;
  for (ClassId m : out.candidates) {
    const AncestorMap other(h, h.index_of(m));
    auto common = common_ancestors(origin, other);
    if (common.cost && (!out.cost || *common.cost < *out.cost)) out.cost = common.cost;
    per_member.emplace_back(m, std::move(common));
  }
  if (!out.cost) return out;
  for (const auto& [m, common] : per_member) {
    if (common.cost == out.cost) {
      out.s_best.push_back(m);
      for (Index i : common.apexes) out.lcas.push_back(h.id(i));
    }
  }
  out.lcas = make_class_set(std::move(out.lcas));
  return out;
}

ClassSet make_class_set(std::vector<ClassId> ids) {
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  return ids;
}

std::size_t intersection_size(const ClassSet& a, const ClassSet& b) {
  std::size_t count = 0;
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      ++count;
      ++i;
      ++j;
    }
  }
  return count;
}

ClassSet set_union(const ClassSet& a, const ClassSet& b) {
  ClassSet out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

bool set_contains(const ClassSet& s, ClassId id) { return std::binary_search(s.begin(), s.end(), id); }

}  // namespace hceval
