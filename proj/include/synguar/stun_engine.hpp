#pragma once

#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "synguar/cluster_unify.hpp"
#include "synguar/enumerator.hpp"
#include "synguar/guarantee.hpp"

namespace synguar {

struct StunOptions
{
  std::size_t max_size = 4;
  /// Maximum number of conditionals, 0 to 2.
  int tier = 0;
  GammaMode gamma = GammaMode::Refined;
  std::size_t max_entries = 3'000'000;
  Sort output_sort = Sort::String;
};

/// Enumerate-then-unify engine for one tier of the string DSL.
class StunEngine : public SynthesisEngine
{
 public:
  /// Throws std::invalid_argument on a tier outside 0..2 or max_size 0.
  StunEngine(std::vector<Component> components, StunOptions options);

  void update_hypothesis(std::span<const Example> examples) override;
  /// Exact count of consistent programs. Throws ResourceCapError.
  HypothesisSize compute_size() override;
  std::optional<Program> pick_program() override;

  /// Consistent programs with at most `tier` <= options().tier conditionals.
  HypothesisSize size_at(int tier);

  const StunOptions& options() const { return d_options; }
  /// The table for the current examples; built on demand.
  const CountTable& table();
  const ClusterMaps& clusters();

 private:
  void build();

  std::vector<Component> d_components;
  StunOptions d_options;
  std::vector<Env> d_inputs;
  std::vector<Value> d_outputs;
  bool d_built = false;
  std::unique_ptr<CountTable> d_table;
  std::unique_ptr<ClusterMaps> d_maps;
  std::unique_ptr<BoolClusters> d_bools;
  std::unique_ptr<Unifier> d_unifier;
  std::optional<HypothesisSize> d_size;
};

}  // namespace synguar
