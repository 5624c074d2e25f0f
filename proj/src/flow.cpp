#include "hceval/flow.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace hceval::flow {

double CostMatrix::entry(std::size_t row, std::size_t col) const {
  if (row > predicted || col > truth) throw std::out_of_range("cost matrix index");
  if (row == predicted && col == truth) return kForbidden;
  if (row == predicted || col == truth) return default_cost;
  return at(row, col);
}

PairingBounds PairingBounds::many_to_many(std::size_t m, std::size_t n) {
  // An empty side would zero the upper bounds of the other side's edges.
  return {1, static_cast<std::int64_t>(std::max<std::size_t>(n, 1)), 1,
          static_cast<std::int64_t>(std::max<std::size_t>(m, 1))};
}

PairingNetwork build_pairing_network(const CostMatrix& costs, const PairingBounds& b) {
  if (b.alpha_p < 0 || b.alpha_t < 0 || b.alpha_p > b.beta_p || b.alpha_t > b.beta_t) {
    throw std::invalid_argument("pairing bounds must satisfy 0 <= alpha <= beta");
  }
  if (costs.pair_costs.size() != costs.predicted * costs.truth) {
    throw std::invalid_argument("cost matrix size does not match its dimensions");
  }
  PairingNetwork net;
  net.predicted = costs.predicted;
  net.truth = costs.truth;
  net.bounds = b;
  const std::size_t m = costs.predicted;
  const std::size_t n = costs.truth;
  const auto mi = static_cast<std::int64_t>(m);
  const auto ni = static_cast<std::int64_t>(n);
  net.pair_edge.assign((m + 1) * (n + 1), -1);

  auto add = [&net](std::size_t from, std::size_t to, std::int64_t lo, std::int64_t hi, double cost) {
    net.edges.push_back({from, to, lo, hi, cost});
    return static_cast<std::ptrdiff_t>(net.edges.size() - 1);
  };

  for (std::size_t i = 0; i < m; ++i) add(net.source(), net.predicted_vertex(i), b.alpha_p, b.beta_p, 0.0);
  add(net.source(), net.default_predicted(), 0, b.beta_t * ni, 0.0);

  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double c = costs.at(i, j);
      if (std::isinf(c)) continue;
      if (c < 0.0) throw std::invalid_argument("pairing costs must be non-negative");
      net.pair_edge[i * (n + 1) + j] = add(net.predicted_vertex(i), net.truth_vertex(j), 0, 1, c);
    }
    net.pair_edge[i * (n + 1) + n] = add(net.predicted_vertex(i), net.default_truth(), 0, b.beta_p, costs.default_cost);
  }
  for (std::size_t j = 0; j < n; ++j) {
    net.pair_edge[m * (n + 1) + j] = add(net.default_predicted(), net.truth_vertex(j), 0, b.beta_t, costs.default_cost);
  }

  for (std::size_t j = 0; j < n; ++j) add(net.truth_vertex(j), net.sink(), b.alpha_t, b.beta_t, 0.0);
  add(net.default_truth(), net.sink(), 0, b.beta_p * mi, 0.0);
  add(net.sink(), net.source(), 0, b.beta_t * ni + b.beta_p * mi, 0.0);
  return net;
}

namespace {

struct ResidualArc {
  std::size_t to;
  std::size_t rev;
  std::int64_t cap;
  double cost;
};

}  // namespace

std::vector<std::int64_t> solve_min_cost_circulation(std::size_t vertex_count, std::span<const NetworkEdge> edges) {
  const std::size_t super_source = vertex_count;
  const std::size_t super_sink = vertex_count + 1;
  const std::size_t v = vertex_count + 2;
  std::vector<std::vector<ResidualArc>> graph(v);
  std::vector<std::pair<std::size_t, std::size_t>> handle(edges.size());
  std::vector<std::int64_t> excess(vertex_count, 0);

  auto add_arc = [&graph](std::size_t from, std::size_t to, std::int64_t cap, double cost) {
    graph[from].push_back({to, graph[to].size(), cap, cost});
    graph[to].push_back({from, graph[from].size() - 1, 0, -cost});
    return std::make_pair(from, graph[from].size() - 1);
  };

  for (std::size_t k = 0; k < edges.size(); ++k) {
    const NetworkEdge& e = edges[k];
    if (e.from >= vertex_count || e.to >= vertex_count) throw std::invalid_argument("edge endpoint out of range");
    if (e.lower < 0 || e.lower > e.upper) throw std::invalid_argument("edge capacity interval is empty");
    if (e.cost < 0.0 || std::isnan(e.cost)) throw std::invalid_argument("edge costs must be non-negative");
    handle[k] = add_arc(e.from, e.to, e.upper - e.lower, e.cost);
    excess[e.to] += e.lower;
    excess[e.from] -= e.lower;
  }
  std::int64_t required = 0;
  for (std::size_t u = 0; u < vertex_count; ++u) {
    if (excess[u] > 0) {
      add_arc(super_source, u, excess[u], 0.0);
      required += excess[u];
    } else if (excess[u] < 0) {
      add_arc(u, super_sink, -excess[u], 0.0);
    }
  }

  // Successive shortest paths; all residual costs start non-negative, so zero
  // potentials are valid. Dense Dijkstra suits the small pairing networks.
  constexpr double kInf = std::numeric_limits<double>::infinity();
  constexpr double kEps = 1e-9;
  std::vector<double> potential(v, 0.0);
  std::vector<double> dist(v);
  std::vector<std::pair<std::size_t, std::size_t>> via(v);
  std::vector<bool> done(v);
  std::int64_t pushed = 0;
  while (pushed < required) {
    std::fill(dist.begin(), dist.end(), kInf);
    std::fill(done.begin(), done.end(), false);
    dist[super_source] = 0.0;
    for (;;) {
      std::size_t u = v;
      for (std::size_t x = 0; x < v; ++x) {
        if (!done[x] && dist[x] < kInf && (u == v || dist[x] < dist[u])) u = x;
      }
      if (u == v) break;
      done[u] = true;
      for (std::size_t a = 0; a < graph[u].size(); ++a) {
        const ResidualArc& arc = graph[u][a];
        if (arc.cap <= 0) continue;
        const double reduced = std::max(0.0, arc.cost + potential[u] - potential[arc.to]);
        if (dist[u] + reduced < dist[arc.to] - kEps) {
          dist[arc.to] = dist[u] + reduced;
          via[arc.to] = {u, a};
        }
      }
    }
    if (dist[super_sink] == kInf) throw InfeasibleFlowError();
    for (std::size_t x = 0; x < v; ++x) {
      if (dist[x] < kInf) potential[x] += dist[x];
    }
    std::int64_t bottleneck = required - pushed;
    for (std::size_t x = super_sink; x != super_source; x = via[x].first) {
      bottleneck = std::min(bottleneck, graph[via[x].first][via[x].second].cap);
    }
    for (std::size_t x = super_sink; x != super_source; x = via[x].first) {
      ResidualArc& arc = graph[via[x].first][via[x].second];
      arc.cap -= bottleneck;
      graph[arc.to][arc.rev].cap += bottleneck;
    }
    pushed += bottleneck;
  }

  std::vector<std::int64_t> flow(edges.size());
  for (std::size_t k = 0; k < edges.size(); ++k) {
    const auto& arc = graph[handle[k].first][handle[k].second];
    flow[k] = edges[k].lower + graph[arc.to][arc.rev].cap;
  }
  return flow;
}

FlowResult solve_min_cost_flow(const PairingNetwork& net) {
  FlowResult out;
  out.flow = solve_min_cost_circulation(net.vertex_count(), net.edges);
  for (std::size_t k = 0; k < net.edges.size(); ++k) out.total_cost += net.edges[k].cost * static_cast<double>(out.flow[k]);
  for (std::size_t row = 0; row <= net.predicted; ++row) {
    for (std::size_t col = 0; col <= net.truth; ++col) {
      const auto e = net.pairing_edge(row, col);
      if (e < 0) continue;
      const auto units = out.flow[static_cast<std::size_t>(e)];
      if (units > 0) out.pairs.push_back({row, col, units, net.edges[static_cast<std::size_t>(e)].cost});
    }
  }
  return out;
}

}  // namespace hceval::flow
