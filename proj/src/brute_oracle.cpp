#include "synguar/brute_oracle.hpp"

#include <set>
#include <stdexcept>

#include "synguar/errors.hpp"

namespace synguar {

namespace {

constexpr std::size_t kSorts = 3;

std::size_t sort_index(Sort s)
{
  return static_cast<std::size_t>(s);
}

void validate(const BruteConfig& config)
{
  if (config.max_size == 0 || config.max_size > 6)
  {
    throw std::invalid_argument("brute force supports max_size 1..6");
  }
  if (config.max_nesting < 0 || config.max_nesting > 2)
  {
    throw std::invalid_argument("brute force supports nesting 0..2");
  }
}

void check_cap(const BigNat& estimate, const BruteConfig& config)
{
  if (estimate > config.cap)
  {
    throw ResourceCapError("brute force would materialize " + estimate.str()
                           + " programs, above the cap of "
                           + std::to_string(config.cap));
  }
}

// Calls f(sizes) for every tuple of `arity` sizes >= 1 summing to `total`.
template <class F>
void compositions(std::size_t arity, std::size_t total, std::vector<std::size_t>& sizes,
                  F&& f)
{
  if (sizes.size() + 1 == arity)
  {
    if (total >= 1)
    {
      sizes.push_back(total);
      f(sizes);
      sizes.pop_back();
    }
    return;
  }
  std::size_t rest = arity - sizes.size() - 1;
  for (std::size_t s = 1; s + rest <= total; ++s)
  {
    sizes.push_back(s);
    compositions(arity, total - s, sizes, f);
    sizes.pop_back();
  }
}

std::string consistency(std::span<const Value> values, std::span<const Value> outputs)
{
  std::string s(outputs.size(), '0');
  for (std::size_t i = 0; i < outputs.size(); ++i)
  {
    if (values[i] == outputs[i]) s[i] = '1';
  }
  return s;
}

std::string ite_bits(const std::string& cond, const std::string& then_bits,
                     const std::string& else_bits)
{
  std::string s(cond.size(), '0');
  for (std::size_t i = 0; i < cond.size(); ++i)
  {
    s[i] = cond[i] == '1' ? then_bits[i] : else_bits[i];
  }
  return s;
}

std::vector<Value> ite_values(const std::vector<Value>& cond, const std::vector<Value>& t,
                              const std::vector<Value>& e)
{
  std::vector<Value> out;
  out.reserve(cond.size());
  for (std::size_t i = 0; i < cond.size(); ++i)
  {
    out.push_back(std::get<bool>(cond[i]) ? t[i] : e[i]);
  }
  return out;
}

std::vector<Value> eval_all(const Expr& e, std::span<const Env> envs)
{
  std::vector<Value> out;
  out.reserve(envs.size());
  for (const auto& env : envs) out.push_back(eval(e, env));
  return out;
}

}  // namespace

BruteEstimate estimate_programs(const BruteConfig& config)
{
  validate(config);
  std::vector<std::vector<BigNat>> count(kSorts, std::vector<BigNat>(config.max_size + 1));
  for (const auto& c : config.components)
  {
    if (c.is_leaf()) count[sort_index(c.result_sort)][1] += 1;
  }
  for (std::size_t size = 2; size <= config.max_size; ++size)
  {
    for (const auto& c : config.components)
    {
      if (c.is_leaf()) continue;
      std::vector<std::size_t> sizes;
      compositions(c.arity(), size - 1, sizes, [&](const std::vector<std::size_t>& sz) {
        BigNat product = 1;
        for (std::size_t i = 0; i < sz.size(); ++i)
        {
          product *= count[sort_index(c.arg_sorts[i])][sz[i]];
        }
        count[sort_index(c.result_sort)][size] += product;
      });
    }
  }
  BruteEstimate est;
  BigNat bools = 0;
  BigNat results = 0;
  for (std::size_t s = 0; s < kSorts; ++s)
  {
    for (const auto& n : count[s]) est.straight_line += n;
  }
  for (const auto& n : count[sort_index(Sort::Bool)]) bools += n;
  for (const auto& n : count[sort_index(config.result_sort)]) results += n;
  est.by_conditions.push_back(results);
  for (int i = 1; i <= config.max_nesting; ++i)
  {
    est.by_conditions.push_back(bools * results * est.by_conditions.back());
  }
  return est;
}

std::vector<std::vector<std::vector<Expr>>> enumerate_straight_line(const BruteConfig& config)
{
  BruteEstimate est = estimate_programs(config);
  check_cap(est.straight_line, config);

  std::vector<std::vector<std::vector<Expr>>> progs(
      kSorts, std::vector<std::vector<Expr>>(config.max_size + 1));
  for (const auto& c : config.components)
  {
    if (c.is_leaf()) progs[sort_index(c.result_sort)][1].push_back(*c.leaf);
  }
  for (std::size_t size = 2; size <= config.max_size; ++size)
  {
    for (const auto& c : config.components)
    {
      if (c.is_leaf()) continue;
      auto& out = progs[sort_index(c.result_sort)][size];
      std::vector<std::size_t> sizes;
      compositions(c.arity(), size - 1, sizes, [&](const std::vector<std::size_t>& sz) {
        std::vector<const std::vector<Expr>*> pools;
        for (std::size_t i = 0; i < sz.size(); ++i)
        {
          pools.push_back(&progs[sort_index(c.arg_sorts[i])][sz[i]]);
          if (pools.back()->empty()) return;
        }
        std::vector<std::size_t> idx(sz.size(), 0);
        for (;;)
        {
          std::vector<Expr> args;
          for (std::size_t i = 0; i < idx.size(); ++i) args.push_back((*pools[i])[idx[i]]);
          out.push_back(Expr::apply(c.op, std::move(args)));
          std::size_t k = idx.size();
          while (k > 0)
          {
            --k;
            if (++idx[k] < pools[k]->size()) break;
            idx[k] = 0;
            if (k == 0) return;
          }
        }
      });
    }
  }
  return progs;
}

std::vector<Expr> enumerate_all(const BruteConfig& config)
{
  BruteEstimate est = estimate_programs(config);
  BigNat total = est.straight_line;
  for (std::size_t i = 1; i < est.by_conditions.size(); ++i) total += est.by_conditions[i];
  check_cap(total, config);

  auto progs = enumerate_straight_line(config);
  std::vector<Expr> straight;
  for (const auto& layer : progs[sort_index(config.result_sort)])
  {
    straight.insert(straight.end(), layer.begin(), layer.end());
  }
  std::vector<Expr> conds;
  for (const auto& layer : progs[sort_index(Sort::Bool)])
  {
    conds.insert(conds.end(), layer.begin(), layer.end());
  }

  std::vector<Expr> all = straight;
  std::vector<Expr> previous = straight;
  for (int depth = 1; depth <= config.max_nesting; ++depth)
  {
    std::vector<Expr> shape;
    for (const auto& c : conds)
    {
      for (const auto& t : straight)
      {
        for (const auto& e : previous) shape.push_back(Expr::ite(c, t, e));
      }
    }
    all.insert(all.end(), shape.begin(), shape.end());
    previous = std::move(shape);
  }
  return all;
}

BigNat BruteCounts::pattern_count(std::string_view pattern, int conditions) const
{
  BigNat total = 0;
  for (const auto& [bits, n] : by_consistency.at(static_cast<std::size_t>(conditions)))
  {
    if (bits.size() != pattern.size()) continue;
    bool match = true;
    for (std::size_t i = 0; i < bits.size() && match; ++i)
    {
      match = pattern[i] == '*' || pattern[i] == bits[i];
    }
    if (match) total += n;
  }
  return total;
}

BigNat BruteCounts::consistency_count(std::string_view vector) const
{
  auto it = by_consistency.at(0).find(std::string(vector));
  return it == by_consistency.at(0).end() ? BigNat(0) : it->second;
}

BruteCounts exact_counts(const BruteConfig& config, std::span<const Value> outputs)
{
  if (outputs.size() != config.inputs.size())
  {
    throw std::invalid_argument("one output per example is required");
  }
  auto progs = enumerate_straight_line(config);
  const std::size_t result = sort_index(config.result_sort);
  const bool semantic = config.domain.has_value();
  std::span<const Env> domain =
      semantic ? std::span<const Env>(*config.domain) : std::span<const Env>();

  BruteCounts out;
  // Branch groups keyed by consistency bits, and conditions by value bits.
  std::map<std::string, BigNat> branch0;
  std::map<std::string, BigNat> cond_groups;
  using SemKey = std::pair<std::string, std::vector<Value>>;
  std::set<SemKey> sem_branch0;
  std::set<SemKey> sem_conds;

  for (std::size_t s = 0; s < kSorts; ++s)
  {
    for (std::size_t size = 1; size <= config.max_size; ++size)
    {
      for (const auto& p : progs[s][size])
      {
        std::vector<Value> values = eval_all(p, config.inputs);
        if (s == result)
        {
          std::string bits = consistency(values, outputs);
          branch0[bits] += 1;
          if (semantic) sem_branch0.emplace(bits, eval_all(p, domain));
        }
        if (s == sort_index(Sort::Bool) && config.max_nesting > 0)
        {
          std::string bits(values.size(), '0');
          for (std::size_t i = 0; i < values.size(); ++i)
          {
            if (std::get<bool>(values[i])) bits[i] = '1';
          }
          cond_groups[bits] += 1;
          if (semantic) sem_conds.emplace(bits, eval_all(p, domain));
        }
        out.per_vector[{static_cast<Sort>(s), std::move(values), size}] += 1;
      }
    }
  }

  out.by_consistency.push_back(branch0);
  for (int depth = 1; depth <= config.max_nesting; ++depth)
  {
    std::map<std::string, BigNat> shape;
    const auto& previous = out.by_consistency.back();
    for (const auto& [cb, nc] : cond_groups)
    {
      for (const auto& [tb, nt] : branch0)
      {
        for (const auto& [eb, ne] : previous) shape[ite_bits(cb, tb, eb)] += nc * nt * ne;
      }
    }
    out.by_consistency.push_back(std::move(shape));
  }

  const std::string all_ok(outputs.size(), '1');
  BigNat consistent = 0;
  BigNat total = 0;
  for (const auto& shape : out.by_consistency)
  {
    for (const auto& [bits, n] : shape)
    {
      total += n;
      if (bits == all_ok) consistent += n;
    }
    out.tier_consistent.push_back(consistent);
    out.tier_total.push_back(total);
  }

  if (semantic)
  {
    std::vector<std::uint64_t> distinct;
    std::set<std::vector<Value>> functions;
    std::set<SemKey> previous = sem_branch0;
    for (int depth = 0; depth <= config.max_nesting; ++depth)
    {
      if (depth > 0)
      {
        std::set<SemKey> shape;
        for (const auto& [cb, cv] : sem_conds)
        {
          for (const auto& [tb, tv] : sem_branch0)
          {
            for (const auto& [eb, ev] : previous)
            {
              shape.emplace(ite_bits(cb, tb, eb), ite_values(cv, tv, ev));
            }
          }
        }
        previous = std::move(shape);
      }
      for (const auto& [bits, fn] : previous)
      {
        if (bits == all_ok) functions.insert(fn);
      }
      distinct.push_back(functions.size());
    }
    out.semantic_consistent = std::move(distinct);
  }
  return out;
}

}  // namespace synguar
