#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace hceval::flow {

inline constexpr double kForbidden = std::numeric_limits<double>::infinity();

// Pairing costs between M predicted and N true classes. Row M is the default
// predicted class and column N the default true class; both price every
// pairing at default_cost. The (M, N) corner is never used.
struct CostMatrix {
  std::size_t predicted = 0;
  std::size_t truth = 0;
  std::vector<double> pair_costs;  // row-major M x N, kForbidden removes the pairing edge
  double default_cost = 5.0;

  CostMatrix() = default;
  CostMatrix(std::size_t m, std::size_t n, double d_max)
      : predicted(m), truth(n), pair_costs(m * n, 0.0), default_cost(d_max) {}

  double& at(std::size_t p, std::size_t t) { return pair_costs[p * truth + t]; }
  double at(std::size_t p, std::size_t t) const { return pair_costs[p * truth + t]; }
  // Extended (M+1) x (N+1) view.
  double entry(std::size_t row, std::size_t col) const;
};

// Capacity bounds on how many pairs each predicted / true class joins.
struct PairingBounds {
  std::int64_t alpha_p = 1;
  std::int64_t beta_p = 1;
  std::int64_t alpha_t = 1;
  std::int64_t beta_t = 1;

  static PairingBounds one_to_one() { return {1, 1, 1, 1}; }
  // Each class may pair with several classes of the other set.
  static PairingBounds many_to_many(std::size_t m, std::size_t n);
};

struct NetworkEdge {
  std::size_t from = 0;
  std::size_t to = 0;
  std::int64_t lower = 0;
  std::int64_t upper = 0;
  double cost = 0.0;
};

// Flow network for the pairing problem. Vertex layout: source, sink,
// P_1..P_M, T_1..T_N, DP, DT.
struct PairingNetwork {
  std::size_t predicted = 0;
  std::size_t truth = 0;
  PairingBounds bounds;
  std::vector<NetworkEdge> edges;
  // Edge index of the pairing edge for extended cell (row, col); -1 if absent.
  std::vector<std::ptrdiff_t> pair_edge;

  std::size_t source() const noexcept { return 0; }
  std::size_t sink() const noexcept { return 1; }
  std::size_t predicted_vertex(std::size_t i) const noexcept { return 2 + i; }
  std::size_t truth_vertex(std::size_t j) const noexcept { return 2 + predicted + j; }
  std::size_t default_predicted() const noexcept { return 2 + predicted + truth; }
  std::size_t default_truth() const noexcept { return 3 + predicted + truth; }
  std::size_t vertex_count() const noexcept { return 4 + predicted + truth; }

  std::ptrdiff_t pairing_edge(std::size_t row, std::size_t col) const { return pair_edge[row * (truth + 1) + col]; }
};

PairingNetwork build_pairing_network(const CostMatrix& costs, const PairingBounds& bounds);

class InfeasibleFlowError : public std::runtime_error {
 public:
  InfeasibleFlowError() : std::runtime_error("no feasible flow satisfies the capacity intervals") {}
};

// Minimum-cost circulation honouring lower and upper bounds. Costs must be
// non-negative. Returns the integral flow on every edge or throws
// InfeasibleFlowError.
std::vector<std::int64_t> solve_min_cost_circulation(std::size_t vertex_count, std::span<const NetworkEdge> edges);

struct Pairing {
  std::size_t row = 0;  // predicted index, or M for the default predicted class
  std::size_t col = 0;  // true index, or N for the default true class
  std::int64_t units = 0;
  double cost = 0.0;
};

struct FlowResult {
  std::vector<std::int64_t> flow;  // per network edge
  double total_cost = 0.0;
  std::vector<Pairing> pairs;      // pairing edges with positive flow, row-major
};

FlowResult solve_min_cost_flow(const PairingNetwork& net);

}  // namespace hceval::flow
