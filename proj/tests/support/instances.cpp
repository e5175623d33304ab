#include "support/instances.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "synguar/enumerator.hpp"

namespace synguar::testing {

namespace {

constexpr std::string_view kAlphabet = "ab|";

std::string random_string(Rng& rng, std::size_t max_len)
{
  std::uniform_int_distribution<std::size_t> len(0, max_len);
  std::uniform_int_distribution<std::size_t> pick(0, kAlphabet.size() - 1);
  std::string s(len(rng), ' ');
  for (char& c : s) c = kAlphabet[pick(rng)];
  return s;
}

Value random_value(Rng& rng, Sort sort)
{
  switch (sort)
  {
    case Sort::String:
      return random_string(rng, 3);
    case Sort::Int:
      return std::uniform_int_distribution<std::int64_t>(-1, 3)(rng);
    case Sort::Bool:
      return std::bernoulli_distribution(0.5)(rng);
  }
  return false;
}

bool coin(Rng& rng, double p)
{
  return std::bernoulli_distribution(p)(rng);
}

std::string vector_text(std::span<const Value> values)
{
  std::string s = "[";
  for (std::size_t i = 0; i < values.size(); ++i)
  {
    if (i) s += ' ';
    s += value_text(values[i]);
  }
  return s + "]";
}

}  // namespace

std::string Instance::describe() const
{
  std::ostringstream out;
  out << "components:";
  for (const auto& c : components) out << ' ' << c.name;
  out << " | max_size " << max_size << " nesting " << nesting << " result "
      << sort_name(result_sort) << " | examples:";
  for (std::size_t i = 0; i < inputs.size(); ++i)
  {
    out << " (";
    for (std::size_t j = 0; j < inputs[i].size(); ++j)
    {
      out << (j ? " " : "") << inputs[i].name(j) << '=' << value_text(inputs[i].value(j));
    }
    out << ")->" << value_text(outputs[i]);
  }
  return out.str();
}

Env random_env(Rng& rng, const Signature& sig)
{
  Env env;
  for (const auto& d : sig) env.bind(d.name, random_value(rng, d.sort));
  return env;
}

Expr random_expr(Rng& rng, std::span<const Component> components, Sort sort, int depth)
{
  std::vector<const Component*> leaves;
  std::vector<const Component*> functions;
  for (const auto& c : components)
  {
    if (c.result_sort != sort) continue;
    (c.is_leaf() ? leaves : functions).push_back(&c);
  }
  auto pick = [&rng](const std::vector<const Component*>& from) {
    return from[std::uniform_int_distribution<std::size_t>(0, from.size() - 1)(rng)];
  };
  if (functions.empty() || depth == 0 || (!leaves.empty() && coin(rng, 0.4)))
  {
    if (leaves.empty()) return Expr::literal(random_value(rng, sort));
    return *pick(leaves)->leaf;
  }
  const Component* f = pick(functions);
  std::vector<Expr> args;
  for (Sort s : f->arg_sorts) args.push_back(random_expr(rng, components, s, depth - 1));
  return Expr::apply(f->op, std::move(args));
}

Instance random_instance(Rng& rng, const InstanceLimits& limits)
{
  for (;;)
  {
    Instance inst;
    LanguageConfig lang;
    lang.inputs.push_back({"x", Sort::String});
    if (limits.max_inputs > 1 && coin(rng, 0.5))
    {
      lang.inputs.push_back(coin(rng, 0.5) ? InputDecl{"y", Sort::String}
                                           : InputDecl{"n", Sort::Int});
    }
    for (std::string c : {"a", "b", "|"})
    {
      if (coin(rng, 0.4)) lang.string_constants.push_back(c);
    }
    if (coin(rng, 0.3)) lang.int_constants.push_back(2);
    inst.signature = lang.inputs;
    inst.result_sort = coin(rng, 0.8) ? Sort::String : Sort::Int;

    std::vector<Component> all = default_component_set(lang);
    std::vector<Component> chosen;
    std::vector<Component> optional;
    for (auto& c : all)
    {
      (c.is_leaf() && c.op == Op::Input ? chosen : optional).push_back(std::move(c));
    }
    std::shuffle(optional.begin(), optional.end(), rng);
    std::size_t budget = limits.max_components - std::min(chosen.size(), limits.max_components);
    inst.nesting = std::uniform_int_distribution<int>(0, limits.max_nesting)(rng);
    if (inst.nesting > 0)
    {
      auto boolean = std::find_if(optional.begin(), optional.end(), [](const Component& c) {
        return !c.is_leaf() && c.result_sort == Sort::Bool;
      });
      if (boolean != optional.end()) std::iter_swap(optional.begin(), boolean);
    }
    std::size_t take = std::uniform_int_distribution<std::size_t>(budget / 2, budget)(rng);
    for (std::size_t i = 0; i < take && i < optional.size(); ++i) chosen.push_back(optional[i]);

    bool has_result_leaf = std::any_of(chosen.begin(), chosen.end(), [&](const Component& c) {
      return c.is_leaf() && c.result_sort == inst.result_sort;
    });
    if (!has_result_leaf) continue;
    inst.components = std::move(chosen);

    inst.max_size = std::uniform_int_distribution<std::size_t>(
        std::min<std::size_t>(3, limits.max_size), limits.max_size)(rng);

    BruteConfig probe;
    probe.components = inst.components;
    probe.result_sort = inst.result_sort;
    probe.max_nesting = inst.nesting;
    while (inst.max_size > 1)
    {
      probe.max_size = inst.max_size;
      if (estimate_programs(probe).straight_line <= limits.max_programs) break;
      --inst.max_size;
    }

    std::size_t n = std::uniform_int_distribution<std::size_t>(0, limits.max_examples)(rng);
    for (std::size_t i = 0; i < n; ++i) inst.inputs.push_back(random_env(rng, inst.signature));

    std::optional<Expr> source;
    if (coin(rng, 0.7))
    {
      source = random_expr(rng, inst.components, inst.result_sort, 2);
    }
    for (const auto& env : inst.inputs)
    {
      inst.outputs.push_back(source ? eval(*source, env) : random_value(rng, inst.result_sort));
    }
    return inst;
  }
}

std::string consistency_text(const Expr& e, const Instance& instance)
{
  std::string s;
  for (std::size_t i = 0; i < instance.inputs.size(); ++i)
  {
    s += eval(e, instance.inputs[i]) == instance.outputs[i] ? '1' : '0';
  }
  return s;
}

std::vector<std::string> compare_with_brute(const Instance& inst, Rng& rng,
                                            int patterns_per_tier)
{
  std::vector<std::string> issues;
  auto check = [&issues](const std::string& what, const BigNat& engine, const BigNat& truth) {
    if (engine != truth)
    {
      issues.push_back(what + ": engine " + engine.str() + ", brute force " + truth.str());
    }
  };

  BruteConfig config;
  config.components = inst.components;
  config.max_size = inst.max_size;
  config.max_nesting = inst.nesting;
  config.result_sort = inst.result_sort;
  config.inputs = inst.inputs;
  BruteCounts brute = exact_counts(config, inst.outputs);

  EnumerationOptions options;
  options.max_size = inst.max_size;
  CountTable table = enumerate(inst.components, inst.inputs, options);

  std::map<BruteCounts::VectorKey, BigNat> engine_counts;
  for (EntryId id = 0; id < table.entry_count(); ++id)
  {
    std::vector<Value> values = table.values(id);
    for (const auto& cell : table.cells(id))
    {
      engine_counts[{table.sort(id), values, cell.size}] = cell.count;
      if (cell.representative.component_size() != cell.size)
      {
        issues.push_back("representative of wrong size: " + pretty(cell.representative));
      }
      for (std::size_t i = 0; i < inst.inputs.size(); ++i)
      {
        if (eval(cell.representative, inst.inputs[i]) != values[i])
        {
          issues.push_back("representative disagrees with its vector: "
                           + pretty(cell.representative));
          break;
        }
      }
    }
  }
  auto key_text = [](const BruteCounts::VectorKey& key) {
    const auto& [sort, values, size] = key;
    return "Count(" + std::string(sort_name(sort)) + " " + vector_text(values) + ", "
           + std::to_string(size) + ")";
  };
  for (const auto& [key, truth] : brute.per_vector)
  {
    auto it = engine_counts.find(key);
    check(key_text(key), it == engine_counts.end() ? BigNat(0) : it->second, truth);
  }
  for (const auto& [key, count] : engine_counts)
  {
    if (!brute.per_vector.count(key)) check(key_text(key), count, 0);
  }

  ClusterMaps maps = cluster(table, inst.result_sort, inst.outputs);
  BoolClusters bools = bool_clusters(table);
  std::map<std::string, BigNat> engine_clusters;
  for (const auto& c : maps.clusters()) engine_clusters[c.vector.to_string()] = c.count;
  for (const auto& [bits, truth] : brute.by_consistency[0])
  {
    auto it = engine_clusters.find(bits);
    check("count_c <" + bits + ">", it == engine_clusters.end() ? BigNat(0) : it->second,
          truth);
  }
  for (const auto& [bits, count] : engine_clusters)
  {
    if (!brute.by_consistency[0].count(bits)) check("count_c <" + bits + ">", count, 0);
  }

  Unifier unifier(maps, bools);
  const std::size_t n = inst.inputs.size();
  for (int t = 0; t <= inst.nesting; ++t)
  {
    check("tier_size " + std::to_string(t), unifier.tier_size(t).count(),
          brute.tier_consistent[static_cast<std::size_t>(t)]);
    for (int p = 0; p < patterns_per_tier; ++p)
    {
      std::string text(n, '*');
      for (char& c : text) c = "10*"[std::uniform_int_distribution<int>(0, 2)(rng)];
      check("pattern_count(" + text + ", " + std::to_string(t) + ")",
            unifier.pattern_count(Pattern::parse(text), t), brute.pattern_count(text, t));
    }
    auto pick = unifier.unify_pick(t);
    if (pick.has_value() != !unifier.tier_size(t).empty())
    {
      issues.push_back("unify_pick presence disagrees with tier_size " + std::to_string(t));
    }
    if (pick && consistency_text(pick->expr, inst) != std::string(n, '1'))
    {
      issues.push_back("unify_pick returned an inconsistent program " + pretty(pick->expr));
    }
  }
  return issues;
}

}  // namespace synguar::testing
