#include "hceval/evaluate.hpp"

#include <array>
#include <cstdlib>
#include <exception>
#include <utility>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "hceval/lca_measures.hpp"
#include "hceval/set_measures.hpp"

namespace hceval {

namespace {

constexpr std::array<std::pair<Measure, std::string_view>, 13> kNames{{
    {Measure::tie, "tie"},
    {Measure::gie, "gie"},
    {Measure::mgia, "mgia"},
    {Measure::mgia_error, "mgia-error"},
    {Measure::ph, "ph"},
    {Measure::rh, "rh"},
    {Measure::fh, "fh"},
    {Measure::sdl, "sdl"},
    {Measure::plca, "plca"},
    {Measure::rlca, "rlca"},
    {Measure::flca, "flca"},
    {Measure::bianchi_fh, "bianchi-fh"},
    {Measure::desc_fh, "desc-fh"},
}};

bool needs(const EvalConfig& cfg, std::initializer_list<Measure> any) {
  for (Measure m : cfg.measures) {
    for (Measure a : any) {
      if (m == a) return true;
    }
  }
  return false;
}

std::vector<double> means_of(const std::vector<std::vector<double>>& values, std::size_t width) {
  std::vector<double> sums(width, 0.0);
  for (const auto& row : values) {
    for (std::size_t m = 0; m < width; ++m) sums[m] += row[m];
  }
  if (!values.empty()) {
    for (double& s : sums) s /= static_cast<double>(values.size());
  }
  return sums;
}

}  // namespace

std::string_view measure_name(Measure m) {
  for (const auto& [k, name] : kNames) {
    if (k == m) return name;
  }
  return "?";
}

std::optional<Measure> parse_measure(std::string_view name) {
  for (const auto& [k, n] : kNames) {
    if (n == name) return k;
  }
  return std::nullopt;
}

Orientation orientation(Measure m) {
  switch (m) {
    case Measure::tie:
    case Measure::gie:
    case Measure::mgia_error:
    case Measure::sdl:
      return Orientation::lower_better;
    default:
      return Orientation::higher_better;
  }
}

std::vector<double> evaluate_instance(const Hierarchy& full, const InstanceLabels& labels, const EvalConfig& cfg) {
  std::optional<LocalHierarchy> local;
  if (cfg.lca_threshold) local = apply_lca_threshold(full, labels, *cfg.lca_threshold);
  const Hierarchy& h = local ? local->hierarchy : full;

  std::optional<PairScore> g, mg;
  std::optional<SetScore> anc, bianchi, desc;
  std::optional<LcaScore> lca;
  if (needs(cfg, {Measure::gie})) g = gie(h, labels, cfg.pair);
  if (needs(cfg, {Measure::mgia, Measure::mgia_error})) mg = mgia(h, labels, cfg.pair);
  if (needs(cfg, {Measure::ph, Measure::rh, Measure::fh, Measure::sdl, Measure::bianchi_fh})) {
    const auto aug = augment(h, labels, AugmentMode::ancestors, cfg.virtual_root);
    anc = set_scores(aug);
    if (needs(cfg, {Measure::bianchi_fh})) bianchi = set_scores(bianchi_filter(h, aug));
  }
  if (needs(cfg, {Measure::desc_fh})) desc = set_scores(augment(h, labels, AugmentMode::descendants, cfg.virtual_root));
  if (needs(cfg, {Measure::plca, Measure::rlca, Measure::flca})) lca = lca_scores(lca_graphs(h, labels));

  std::vector<double> out;
  out.reserve(cfg.measures.size());
  for (Measure m : cfg.measures) {
    switch (m) {
      case Measure::tie:
        if (labels.truth.size() != 1 || labels.predicted.size() != 1) {
          throw std::invalid_argument("tie needs exactly one true and one predicted class");
        }
        out.push_back(tree_induced_error(h, labels.truth[0], labels.predicted[0]));
        break;
      case Measure::gie: out.push_back(g->raw_error); break;
      case Measure::mgia: out.push_back(mg->score); break;
      case Measure::mgia_error: out.push_back(mg->raw_error); break;
      case Measure::ph: out.push_back(anc->p_h); break;
      case Measure::rh: out.push_back(anc->r_h); break;
      case Measure::fh: out.push_back(anc->f_h); break;
      case Measure::sdl: out.push_back(static_cast<double>(anc->sdl)); break;
      case Measure::plca: out.push_back(lca->p_lca); break;
      case Measure::rlca: out.push_back(lca->r_lca); break;
      case Measure::flca: out.push_back(lca->f_lca); break;
      case Measure::bianchi_fh: out.push_back(bianchi->f_h); break;
      case Measure::desc_fh: out.push_back(desc->f_h); break;
    }
  }
  return out;
}

std::vector<double> EvalResult::column(std::size_t measure) const {
  std::vector<double> out;
  out.reserve(values.size());
  for (const auto& row : values) out.push_back(row[measure]);
  return out;
}

EvalResult evaluate_serial(const Hierarchy& h, std::span<const InstanceLabels> instances, const EvalConfig& cfg) {
  EvalResult r;
  r.values.reserve(instances.size());
  for (std::size_t i = 0; i < instances.size(); ++i) {
    try {
      r.values.push_back(evaluate_instance(h, instances[i], cfg));
    } catch (const UnknownClassError&) {
      throw;
    } catch (const std::exception& e) {
      throw InstanceError(i, e.what());
    }
  }
  r.means = means_of(r.values, cfg.measures.size());
  return r;
}

int default_workers() {
  if (const char* env = std::getenv("HCEVAL_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

EvalResult evaluate_parallel(const Hierarchy& h, std::span<const InstanceLabels> instances, const EvalConfig& cfg,
                             int workers) {
  if (workers <= 0) workers = default_workers();
  const auto n = static_cast<std::ptrdiff_t>(instances.size());
  EvalResult r;
  r.values.resize(instances.size());
  std::vector<std::exception_ptr> errors(instances.size());

#pragma omp parallel for schedule(dynamic, 64) num_threads(workers)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      r.values[static_cast<std::size_t>(i)] = evaluate_instance(h, instances[static_cast<std::size_t>(i)], cfg);
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  (void)workers;

  for (std::size_t i = 0; i < errors.size(); ++i) {
    if (!errors[i]) continue;
    try {
      std::rethrow_exception(errors[i]);
    } catch (const UnknownClassError&) {
      throw;
    } catch (const std::exception& e) {
      throw InstanceError(i, e.what());
    }
  }
  r.means = means_of(r.values, cfg.measures.size());
  return r;
}

}  // namespace hceval
