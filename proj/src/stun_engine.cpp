#include "synguar/stun_engine.hpp"

#include <stdexcept>

namespace synguar {

StunEngine::StunEngine(std::vector<Component> components, StunOptions options)
    : d_components(std::move(components)), d_options(options)
{
  if (options.tier < 0 || options.tier > Unifier::kMaxConditions)
  {
    throw std::invalid_argument("tier must be 0, 1 or 2");
  }
  if (options.max_size == 0)
  {
    throw std::invalid_argument("max_size must be positive");
  }
}

void StunEngine::update_hypothesis(std::span<const Example> examples)
{
  if (d_built && examples.size() == d_inputs.size())
  {
    bool same = true;
    for (std::size_t i = 0; i < examples.size() && same; ++i)
    {
      same = examples[i].inputs == d_inputs[i] && examples[i].output == d_outputs[i];
    }
    if (same) return;
  }
  d_inputs.clear();
  d_outputs.clear();
  for (const auto& e : examples)
  {
    d_inputs.push_back(e.inputs);
    d_outputs.push_back(e.output);
  }
  d_built = false;
  d_unifier.reset();
  d_bools.reset();
  d_maps.reset();
  d_table.reset();
  d_size.reset();
}

void StunEngine::build()
{
  if (d_built) return;
  EnumerationOptions opts;
  opts.max_size = d_options.max_size;
  opts.max_entries = d_options.max_entries;
  opts.include_bool = d_options.tier > 0;
  d_table = std::make_unique<CountTable>(enumerate(d_components, d_inputs, opts));
  d_maps = std::make_unique<ClusterMaps>(cluster(*d_table, d_options.output_sort, d_outputs));
  d_bools = std::make_unique<BoolClusters>(bool_clusters(*d_table));
  d_unifier = std::make_unique<Unifier>(*d_maps, *d_bools, d_options.gamma);
  d_built = true;
}

const CountTable& StunEngine::table()
{
  build();
  return *d_table;
}

const ClusterMaps& StunEngine::clusters()
{
  build();
  return *d_maps;
}

HypothesisSize StunEngine::compute_size()
{
  if (!d_size)
  {
    build();
    d_size = d_unifier->tier_size(d_options.tier);
  }
  return *d_size;
}

HypothesisSize StunEngine::size_at(int tier)
{
  if (tier < 0 || tier > d_options.tier)
  {
    throw std::invalid_argument("tier exceeds the engine's tier");
  }
  if (tier == d_options.tier) return compute_size();
  build();
  return d_unifier->tier_size(tier);
}

std::optional<Program> StunEngine::pick_program()
{
  build();
  return d_unifier->unify_pick(d_options.tier);
}

}  // namespace synguar
