#include "hceval/set_measures.hpp"

#include <algorithm>
#include <stdexcept>

namespace hceval {

namespace {

ClassSet closure(const Hierarchy& h, const ClassSet& labels, AugmentMode mode, std::optional<ClassId> excluded) {
  std::vector<ClassId> out(labels.begin(), labels.end());
  for (ClassId c : labels) {
    const ClassSet more = mode == AugmentMode::ancestors ? ancestors(h, c) : descendants(h, c);
    out.insert(out.end(), more.begin(), more.end());
  }
  ClassSet set = make_class_set(std::move(out));
  if (excluded) std::erase(set, *excluded);
  return set;
}

ClassSet filter_against(const Hierarchy& h, const ClassSet& mine, const ClassSet& other) {
  ClassSet kept;
  kept.reserve(mine.size());
  for (ClassId c : mine) {
    if (set_contains(other, c)) {
      kept.push_back(c);
      continue;
    }
    const auto parents = h.parents(h.index_of(c));
    const bool anchored = std::any_of(parents.begin(), parents.end(),
                                      [&](const Hierarchy::Arc& a) { return set_contains(other, h.id(a.node)); });
    if (anchored) kept.push_back(c);
  }
  return kept;
}

}  // namespace

AugmentedSets augment(const Hierarchy& h, const InstanceLabels& labels, AugmentMode mode,
                      std::optional<ClassId> excluded) {
  AugmentedSets out;
  out.mode = mode;
  out.y_aug = closure(h, labels.truth, mode, excluded);
  out.yhat_aug = closure(h, labels.predicted, mode, excluded);
  return out;
}

AugmentedSets bianchi_filter(const Hierarchy& h, const AugmentedSets& aug) {
  if (aug.mode != AugmentMode::ancestors) throw std::invalid_argument("the tolerance filter needs ancestor augmentation");
  AugmentedSets out;
  out.mode = aug.mode;
  out.filtered = true;
  out.y_aug = filter_against(h, aug.y_aug, aug.yhat_aug);
  out.yhat_aug = filter_against(h, aug.yhat_aug, aug.y_aug);
  return out;
}

double harmonic_mean(double p, double r) { return p + r > 0.0 ? 2.0 * p * r / (p + r) : 0.0; }

SetScore set_scores(const AugmentedSets& aug) {
  SetScore s;
  const auto common = static_cast<double>(intersection_size(aug.y_aug, aug.yhat_aug));
  if (!aug.yhat_aug.empty()) s.p_h = common / static_cast<double>(aug.yhat_aug.size());
  if (!aug.y_aug.empty()) s.r_h = common / static_cast<double>(aug.y_aug.size());
  s.f_h = harmonic_mean(s.p_h, s.r_h);
  s.sdl = static_cast<std::int64_t>(aug.y_aug.size() + aug.yhat_aug.size()) - 2 * static_cast<std::int64_t>(common);
  return s;
}

}  // namespace hceval
