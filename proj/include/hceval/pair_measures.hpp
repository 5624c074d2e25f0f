#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "hceval/flow.hpp"
#include "hceval/hierarchy.hpp"

namespace hceval {

// One instance: true classes Y and predicted classes Ŷ.
struct InstanceLabels {
  ClassSet truth;
  ClassSet predicted;
};

struct PairOptions {
  double d_max = 5.0;
  // Pairs farther apart than this are forced onto the default classes.
  std::optional<double> max_dist;
};

enum class PairMeasure { tie, gie, mgia };

struct MatchedPair {
  std::optional<ClassId> predicted;  // nullopt: default predicted class
  std::optional<ClassId> truth;      // nullopt: default true class
  std::int64_t units = 1;
  double cost = 0.0;
};

struct PairScore {
  PairMeasure measure = PairMeasure::gie;
  double raw_error = 0.0;  // fnerror for MGIA
  double score = 0.0;      // MGIA accuracy; equals raw_error otherwise
  std::vector<MatchedPair> pairs;
};

// Weighted shortest-path length between two classes. Throws UnreachableError.
double tree_induced_error(const Hierarchy& h, ClassId truth, ClassId predicted);

// Pairing costs for the instance. Pairs at or beyond 2 * d_max are left out:
// routing both classes to defaults is never more expensive.
flow::CostMatrix pairing_costs(const Hierarchy& h, const InstanceLabels& labels, const PairOptions& opt);

PairScore gie(const Hierarchy& h, const InstanceLabels& labels, const PairOptions& opt = {});
PairScore mgia(const Hierarchy& h, const InstanceLabels& labels, const PairOptions& opt = {});

}  // namespace hceval
