#include "hceval/pair_measures.hpp"

#include <algorithm>
#include <cmath>

#include "hceval/ancestry.hpp"

namespace hceval {

double tree_induced_error(const Hierarchy& h, ClassId truth, ClassId predicted) {
  const Hierarchy::Index target = h.index_of(predicted);
  const auto d = undirected_distances_to(h, h.index_of(truth), std::span(&target, 1), std::nullopt);
  if (std::isinf(d[0])) throw UnreachableError(truth, predicted);
  return d[0];
}

flow::CostMatrix pairing_costs(const Hierarchy& h, const InstanceLabels& labels, const PairOptions& opt) {
  if (!(opt.d_max > 0.0)) throw std::invalid_argument("d_max must be positive");
  flow::CostMatrix k(labels.predicted.size(), labels.truth.size(), opt.d_max);
  std::vector<Hierarchy::Index> truth;
  truth.reserve(labels.truth.size());
  for (ClassId t : labels.truth) truth.push_back(h.index_of(t));

  double cutoff = 2.0 * opt.d_max;
  if (opt.max_dist) cutoff = std::min(cutoff, *opt.max_dist);
  for (std::size_t i = 0; i < labels.predicted.size(); ++i) {
    const auto d = undirected_distances_to(h, h.index_of(labels.predicted[i]), truth, cutoff);
    for (std::size_t j = 0; j < truth.size(); ++j) {
      const bool over_cap = opt.max_dist && d[j] > *opt.max_dist;
      k.at(i, j) = over_cap ? flow::kForbidden : d[j];
    }
  }
  return k;
}

namespace {

PairScore solve(const InstanceLabels& labels, const flow::CostMatrix& k, const flow::PairingBounds& bounds,
                PairMeasure measure) {
  const auto net = flow::build_pairing_network(k, bounds);
  const auto result = flow::solve_min_cost_flow(net);
  PairScore out;
  out.measure = measure;
  out.raw_error = result.total_cost;
  out.score = result.total_cost;
  for (const auto& p : result.pairs) {
    MatchedPair mp;
    if (p.row < k.predicted) mp.predicted = labels.predicted[p.row];
    if (p.col < k.truth) mp.truth = labels.truth[p.col];
    mp.units = p.units;
    mp.cost = p.cost;
    out.pairs.push_back(mp);
  }
  return out;
}

}  // namespace

PairScore gie(const Hierarchy& h, const InstanceLabels& labels, const PairOptions& opt) {
  return solve(labels, pairing_costs(h, labels, opt), flow::PairingBounds::one_to_one(), PairMeasure::gie);
}

PairScore mgia(const Hierarchy& h, const InstanceLabels& labels, const PairOptions& opt) {
  const auto k = pairing_costs(h, labels, opt);
  PairScore out = solve(labels, k, flow::PairingBounds::many_to_many(k.predicted, k.truth), PairMeasure::mgia);
  const auto all = set_union(labels.truth, labels.predicted).size();
  if (all == 0) {
    out.score = 1.0;
  } else {
    out.score = std::clamp(1.0 - out.raw_error / (static_cast<double>(all) * opt.d_max), 0.0, 1.0);
  }
  return out;
}

}  // namespace hceval
