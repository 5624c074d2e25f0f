#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <set>

namespace hceval::oracle {

PairingOutcome brute_force_pairing(const flow::CostMatrix& k, const flow::PairingBounds& b, const OracleBudget& budget) {
  PairingOutcome out;
  const std::size_t m = k.predicted;
  const std::size_t n = k.truth;
  if (m > budget.max_predicted || n > budget.max_truth) {
    out.budget_exceeded = true;
    return out;
  }
  const std::size_t cells = m * n;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t mask = 0; mask < (std::size_t{1} << cells); ++mask) {
    std::vector<std::int64_t> row(m, 0), col(n, 0);
    double cost = 0.0;
    bool ok = true;
    for (std::size_t c = 0; c < cells && ok; ++c) {
      if (!(mask >> c & 1U)) continue;
      const double kc = k.pair_costs[c];
      if (std::isinf(kc)) ok = false;
      cost += kc;
      ++row[c / n];
      ++col[c % n];
    }
    if (!ok) continue;
    for (std::size_t i = 0; i < m && ok; ++i) {
      if (row[i] > b.beta_p) ok = false;
      cost += static_cast<double>(std::max<std::int64_t>(0, b.alpha_p - row[i])) * k.default_cost;
    }
    for (std::size_t j = 0; j < n && ok; ++j) {
      if (col[j] > b.beta_t) ok = false;
      cost += static_cast<double>(std::max<std::int64_t>(0, b.alpha_t - col[j])) * k.default_cost;
    }
    if (ok && cost < best) best = cost;
  }
  out.feasible = !std::isinf(best);
  out.cost = out.feasible ? best : 0.0;
  return out;
}

namespace {

constexpr int kInf = std::numeric_limits<int>::max() / 4;

struct Label {
  int node;
  int side;
  std::vector<int> s_best;
  std::vector<int> lcas;
};

}  // namespace

GraphOutcome brute_force_minimal_graphs(const Hierarchy& h, const InstanceLabels& labels, const OracleBudget& budget) {
  GraphOutcome out;
  const int n = static_cast<int>(h.size());

  // up[i][j]: fewest upward steps from i to its ancestor-or-self j.
  std::vector<std::vector<int>> up(n, std::vector<int>(n, kInf));
  for (int i = 0; i < n; ++i) {
    up[i][i] = 0;
    for (const auto& arc : h.parents(i)) up[i][arc.node] = 1;
  }
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) {
      if (up[i][k] == kInf) continue;
      for (int j = 0; j < n; ++j) {
        if (up[k][j] != kInf) up[i][j] = std::min(up[i][j], up[i][k] + up[k][j]);
      }
    }
  }

  auto prune = [&](const ClassSet& s) {
    std::vector<int> kept;
    for (ClassId c : s) {
      const int x = h.index_of(c);
      bool nested = false;
      for (ClassId d : s) {
        const int y = h.index_of(d);
        if (y != x && up[y][x] != kInf) nested = true;
      }
      if (!nested) kept.push_back(x);
    }
    return kept;
  };
  std::vector<Label> all;
  for (int x : prune(labels.truth)) all.push_back({x, 0, {}, {}});
  for (int x : prune(labels.predicted)) all.push_back({x, 1, {}, {}});
  if (all.size() > budget.max_labels) {
    out.budget_exceeded = true;
    return out;
  }

  auto pair_cost = [&](int x, int z) {
    int best = kInf;
    for (int a = 0; a < n; ++a) {
      if (up[x][a] != kInf && up[z][a] != kInf) best = std::min(best, up[x][a] + up[z][a]);
    }
    return best;
  };
  auto is_apex = [&](int x, int z, int a) {
    return up[x][a] != kInf && up[z][a] != kInf && up[x][a] + up[z][a] == pair_cost(x, z);
  };
  for (auto& x : all) {
    int best = kInf;
    for (const auto& z : all) {
      if (z.side != x.side) best = std::min(best, pair_cost(x.node, z.node));
    }
    if (best == kInf) continue;
    std::set<int> lcas;
    for (const auto& z : all) {
      if (z.side == x.side || pair_cost(x.node, z.node) != best) continue;
      x.s_best.push_back(z.node);
      for (int a = 0; a < n; ++a) {
        if (is_apex(x.node, z.node, a)) lcas.insert(a);
      }
    }
    x.lcas.assign(lcas.begin(), lcas.end());
  }

  std::function<void(int, int, std::vector<int>&, std::vector<std::vector<int>>&)> walk =
      [&](int node, int a, std::vector<int>& path, std::vector<std::vector<int>>& acc) {
        path.push_back(node);
        if (node == a) {
          acc.push_back(path);
        } else {
          for (const auto& arc : h.parents(node)) {
            if (up[arc.node][a] != kInf && up[arc.node][a] == up[node][a] - 1) walk(arc.node, a, path, acc);
          }
        }
        path.pop_back();
      };
  auto paths = [&](int x, int a) {
    std::vector<std::vector<int>> acc;
    std::vector<int> path;
    walk(x, a, path, acc);
    return acc;
  };

  struct Decision {
    int side;
    std::vector<std::vector<int>> options;
  };
  auto decisions_for = [&](const Label& x, int a) {
    std::vector<Decision> d;
    d.push_back({x.side, paths(x.node, a)});
    std::set<std::vector<int>> cross;
    for (int y : x.s_best) {
      if (!is_apex(x.node, y, a)) continue;
      for (auto& p : paths(y, a)) cross.insert(p);
    }
    if (!cross.empty()) d.push_back({1 - x.side, {cross.begin(), cross.end()}});
    return d;
  };

  std::set<int> ex[2];
  std::set<int> lca_all;
  for (const auto& x : all) {
    ex[x.side].insert(x.node);
    for (int a : x.lcas) {
      lca_all.insert(a);
      for (const auto& d : decisions_for(x, a)) {
        for (const auto& p : d.options) ex[d.side].insert(p.begin(), p.end());
      }
    }
  }
  auto to_ids = [&](const auto& nodes) {
    std::vector<ClassId> ids;
    for (int v : nodes) ids.push_back(h.id(v));
    return make_class_set(std::move(ids));
  };
  out.g_ex_t = to_ids(ex[0]);
  out.g_ex_p = to_ids(ex[1]);
  if (ex[0].size() > budget.max_graph_nodes || ex[1].size() > budget.max_graph_nodes || lca_all.size() > 20) {
    out.budget_exceeded = true;
    return out;
  }

  const std::vector<int> lca_list(lca_all.begin(), lca_all.end());
  auto covers = [&](const std::vector<int>& chosen) {
    for (const auto& x : all) {
      if (x.lcas.empty()) continue;
      bool hit = false;
      for (int a : chosen) hit = hit || std::binary_search(x.lcas.begin(), x.lcas.end(), a);
      if (!hit) return false;
    }
    return true;
  };

  std::size_t examined = 0;
  bool any = false;
  for (std::size_t mask = 0; mask < (std::size_t{1} << lca_list.size()); ++mask) {
    std::vector<int> chosen;
    for (std::size_t k = 0; k < lca_list.size(); ++k) {
      if (mask >> k & 1U) chosen.push_back(lca_list[k]);
    }
    if (!covers(chosen)) continue;
    bool minimal = true;
    for (std::size_t k = 0; k < chosen.size() && minimal; ++k) {
      auto without = chosen;
      without.erase(without.begin() + static_cast<std::ptrdiff_t>(k));
      if (covers(without)) minimal = false;
    }
    if (!minimal) continue;

    std::vector<Decision> decisions;
    std::vector<int> base[2];
    for (const auto& x : all) {
      base[x.side].push_back(x.node);
      for (int a : chosen) {
        if (!std::binary_search(x.lcas.begin(), x.lcas.end(), a)) continue;
        for (auto& d : decisions_for(x, a)) decisions.push_back(std::move(d));
      }
    }
    std::vector<std::size_t> pick(decisions.size(), 0);
    for (;;) {
      if (++examined > budget.max_candidates) {
        out.budget_exceeded = true;
        return out;
      }
      std::set<int> g[2];
      for (int s = 0; s < 2; ++s) g[s].insert(base[s].begin(), base[s].end());
      for (std::size_t k = 0; k < decisions.size(); ++k) {
        const auto& p = decisions[k].options[pick[k]];
        g[decisions[k].side].insert(p.begin(), p.end());
      }
      std::size_t common = 0;
      for (int v : g[0]) common += g[1].count(v);
      const double p = g[1].empty() ? 0.0 : static_cast<double>(common) / static_cast<double>(g[1].size());
      const double r = g[0].empty() ? 0.0 : static_cast<double>(common) / static_cast<double>(g[0].size());
      const double f = p + r > 0.0 ? 2.0 * p * r / (p + r) : 0.0;
      if (!any || f > out.f_lca + 1e-12) {
        any = true;
        out.f_lca = f;
        out.p_lca = p;
        out.r_lca = r;
        out.witnesses.clear();
      }
      if (std::abs(f - out.f_lca) <= 1e-12 && out.witnesses.size() < 256) out.witnesses.push_back({to_ids(chosen), to_ids(g[0]), to_ids(g[1])});

      std::size_t k = 0;
      for (; k < pick.size(); ++k) {
        if (++pick[k] < decisions[k].options.size()) break;
        pick[k] = 0;
      }
      if (k == pick.size()) break;
    }
  }
  return out;
}

}  // namespace hceval::oracle
