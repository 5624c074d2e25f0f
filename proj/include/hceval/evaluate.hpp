#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "hceval/hierarchy.hpp"
#include "hceval/pair_measures.hpp"
#include "hceval/stats.hpp"

namespace hceval {

enum class Measure { tie, gie, mgia, mgia_error, ph, rh, fh, sdl, plca, rlca, flca, bianchi_fh, desc_fh };

std::string_view measure_name(Measure m);
std::optional<Measure> parse_measure(std::string_view name);
Orientation orientation(Measure m);

struct EvalConfig {
  std::vector<Measure> measures;
  PairOptions pair;
  std::optional<int> lca_threshold;
  std::optional<ClassId> virtual_root;
};

// Failure while scoring one instance.
class InstanceError : public std::runtime_error {
 public:
  InstanceError(std::size_t instance, const std::string& what)
      : std::runtime_error("instance " + std::to_string(instance + 1) + ": " + what), instance_(instance) {}
  std::size_t instance() const noexcept { return instance_; }

 private:
  std::size_t instance_;
};

// One value per configured measure, in configuration order.
std::vector<double> evaluate_instance(const Hierarchy& h, const InstanceLabels& labels, const EvalConfig& cfg);

struct EvalResult {
  std::vector<std::vector<double>> values;  // [instance][measure]
  std::vector<double> means;                // per measure

  std::vector<double> column(std::size_t measure) const;
};

// Reference implementation: one instance after another.
EvalResult evaluate_serial(const Hierarchy& h, std::span<const InstanceLabels> instances, const EvalConfig& cfg);

// Instance-parallel evaluation. Output is identical to evaluate_serial for any
// worker count; on failure the error of the lowest failing instance is thrown.
EvalResult evaluate_parallel(const Hierarchy& h, std::span<const InstanceLabels> instances, const EvalConfig& cfg,
                             int workers = 0);

// HCEVAL_THREADS if set and positive, else the OpenMP default.
int default_workers();

}  // namespace hceval
