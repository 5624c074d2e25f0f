#pragma once

#include <cstdint>
#include <optional>

#include "hceval/hierarchy.hpp"
#include "hceval/pair_measures.hpp"

namespace hceval {

enum class AugmentMode { ancestors, descendants };

struct AugmentedSets {
  ClassSet y_aug;
  ClassSet yhat_aug;
  AugmentMode mode = AugmentMode::ancestors;
  bool filtered = false;
};

struct SetScore {
  double p_h = 0.0;
  double r_h = 0.0;
  double f_h = 0.0;
  std::int64_t sdl = 0;
};

// Unions each label set with the ancestors (or descendants) of its members.
// `excluded` names a virtual root kept out of both augmented sets.
AugmentedSets augment(const Hierarchy& h, const InstanceLabels& labels, AugmentMode mode = AugmentMode::ancestors,
                      std::optional<ClassId> excluded = std::nullopt);

// Drops nodes of one set that are missing from the other set and have no
// parent in it, tolerating over- and under-specialisation by one level.
AugmentedSets bianchi_filter(const Hierarchy& h, const AugmentedSets& aug);

SetScore set_scores(const AugmentedSets& aug);

double harmonic_mean(double p, double r);

}  // namespace hceval
