#include "synguar/cluster_unify.hpp"

#include <sstream>
#include <stdexcept>

namespace synguar {

Bits Bits::ones(std::size_t n)
{
  Bits b(n);
  for (auto& w : b.d_words) w = ~std::uint64_t{0};
  if (n % 64 != 0) b.d_words.back() = (std::uint64_t{1} << (n % 64)) - 1;
  return b;
}

bool Bits::all() const
{
  return *this == ones(d_size);
}

bool Bits::none() const
{
  for (auto w : d_words)
  {
    if (w != 0) return false;
  }
  return true;
}

Bits Bits::operator&(const Bits& o) const
{
  Bits r(d_size);
  for (std::size_t i = 0; i < d_words.size(); ++i) r.d_words[i] = d_words[i] & o.d_words[i];
  return r;
}

Bits Bits::operator~() const
{
  Bits r = ones(d_size);
  for (std::size_t i = 0; i < d_words.size(); ++i) r.d_words[i] &= ~d_words[i];
  return r;
}

std::string Bits::to_string() const
{
  std::string s(d_size, '0');
  for (std::size_t i = 0; i < d_size; ++i)
  {
    if (test(i)) s[i] = '1';
  }
  return s;
}

std::size_t Bits::hash() const
{
  std::uint64_t h = 0x9e3779b97f4a7c15ULL ^ d_size;
  for (auto w : d_words)
  {
    h ^= w + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return static_cast<std::size_t>(h);
}

Pattern::Pattern(Bits care, Bits want) : d_care(std::move(care)), d_want(std::move(want))
{
  if (d_care.size() != d_want.size())
  {
    throw std::invalid_argument("pattern masks differ in length");
  }
  d_want = d_want & d_care;
}

Pattern Pattern::all_checked(std::size_t n)
{
  return Pattern(Bits::ones(n), Bits::ones(n));
}

Pattern Pattern::all_top(std::size_t n)
{
  return Pattern(Bits(n), Bits(n));
}

Pattern Pattern::parse(std::string_view text)
{
  Bits care(text.size());
  Bits want(text.size());
  for (std::size_t i = 0; i < text.size(); ++i)
  {
    switch (text[i])
    {
      case '1':
        care.set(i);
        want.set(i);
        break;
      case '0':
        care.set(i);
        break;
      case '*':
        break;
      default:
        throw std::invalid_argument("pattern text must use 1, 0 or *");
    }
  }
  return Pattern(std::move(care), std::move(want));
}

Pattern::Mark Pattern::at(std::size_t i) const
{
  if (!d_care.test(i)) return Mark::Top;
  return d_want.test(i) ? Mark::Check : Mark::Cross;
}

bool Pattern::matches(const ConsistencyVector& c) const
{
  auto cw = c.words();
  auto care = d_care.words();
  auto want = d_want.words();
  for (std::size_t i = 0; i < cw.size(); ++i)
  {
    if (((cw[i] ^ want[i]) & care[i]) != 0) return false;
  }
  return true;
}

std::string Pattern::to_string() const
{
  std::string s(size(), '*');
  for (std::size_t i = 0; i < size(); ++i)
  {
    Mark m = at(i);
    if (m != Mark::Top) s[i] = m == Mark::Check ? '1' : '0';
  }
  return s;
}

namespace {

bool better(std::size_t size_a, const Expr& a, std::size_t size_b, const Expr& b)
{
  if (size_a != size_b) return size_a < size_b;
  return compare_preorder(a, b) < 0;
}

// Dense per-size accumulation, compacted once all members are in.
struct SizeSlots
{
  std::vector<std::optional<SizedRep>> slots;

  explicit SizeSlots(std::size_t max_size) : slots(max_size + 1) {}

  void add(std::size_t size, const BigNat& count, const Expr& rep)
  {
    auto& s = slots[size];
    if (!s)
    {
      s = SizedRep{size, count, rep};
      return;
    }
    s->count += count;
    if (compare_preorder(rep, s->representative) < 0) s->representative = rep;
  }

  std::vector<SizedRep> compact()
  {
    std::vector<SizedRep> out;
    for (auto& s : slots)
    {
      if (s) out.push_back(std::move(*s));
    }
    return out;
  }
};

}  // namespace

const Cluster* ClusterMaps::find(const ConsistencyVector& c) const
{
  auto it = d_index.find(c);
  return it == d_index.end() ? nullptr : &d_clusters[it->second];
}

BigNat ClusterMaps::count(const ConsistencyVector& c) const
{
  const Cluster* cl = find(c);
  return cl ? cl->count : BigNat(0);
}

std::string ClusterMaps::to_csv() const
{
  std::ostringstream out;
  out << "consistency_vector,count\n";
  for (const auto& c : d_clusters)
  {
    out << c.vector.to_string() << ',' << c.count << '\n';
  }
  return out.str();
}

ClusterMaps cluster(const CountTable& table, Sort result_sort,
                    std::span<const Value> outputs)
{
  const std::size_t n = table.num_examples();
  if (outputs.size() != n)
  {
    throw std::invalid_argument("one output per example is required");
  }
  std::vector<std::optional<std::uint32_t>> expected;
  expected.reserve(n);
  for (const auto& v : outputs)
  {
    expected.push_back(sort_of(v) == result_sort ? table.pool().find(v) : std::nullopt);
  }

  ClusterMaps maps;
  maps.d_num_examples = n;
  std::vector<SizeSlots> slots;
  for (EntryId id = 0; id < table.entry_count(); ++id)
  {
    if (table.sort(id) != result_sort) continue;
    auto s = table.slots(id);
    Bits c(n);
    for (std::size_t i = 0; i < n; ++i)
    {
      if (expected[i] && s[i] == *expected[i]) c.set(i);
    }
    auto [it, inserted] = maps.d_index.try_emplace(c, maps.d_clusters.size());
    if (inserted)
    {
      maps.d_clusters.push_back({std::move(c), BigNat(0), {}, {}});
      slots.emplace_back(table.max_size());
    }
    Cluster& cl = maps.d_clusters[it->second];
    for (const auto& cell : table.cells(id))
    {
      cl.count += cell.count;
      cl.members.emplace_back(id, cell.size);
      slots[it->second].add(cell.size, cell.count, cell.representative);
    }
  }
  for (std::size_t i = 0; i < maps.d_clusters.size(); ++i)
  {
    maps.d_clusters[i].by_size = slots[i].compact();
  }
  return maps;
}

BoolClusters bool_clusters(const CountTable& table)
{
  const std::size_t n = table.num_examples();
  BoolClusters out;
  for (EntryId id = 0; id < table.entry_count(); ++id)
  {
    if (table.sort(id) != Sort::Bool) continue;
    auto s = table.slots(id);
    Bits b(n);
    for (std::size_t i = 0; i < n; ++i)
    {
      if (s[i] != 0) b.set(i);
    }
    SizeSlots sizes(table.max_size());
    BigNat total = 0;
    for (const auto& cell : table.cells(id))
    {
      total += cell.count;
      sizes.add(cell.size, cell.count, cell.representative);
    }
    out.d_clusters.push_back({std::move(b), std::move(total), sizes.compact()});
  }
  return out;
}

Unifier::Unifier(const ClusterMaps& maps, const BoolClusters& bools, GammaMode mode)
    : d_maps(maps), d_bools(bools), d_mode(mode), d_n(maps.num_examples())
{
  for (const auto& b : bools.clusters())
  {
    if (b.values.size() != d_n)
    {
      throw std::invalid_argument("condition vectors and clusters differ in length");
    }
  }
}

Pattern Unifier::gamma_then(const Pattern& p, const Bits& b) const
{
  if (d_mode == GammaMode::Literal) return Pattern(b, b);
  return Pattern(p.care() & b, p.want() & b);
}

Pattern Unifier::gamma_else(const Pattern& p, const Bits& b) const
{
  Bits nb = ~b;
  if (d_mode == GammaMode::Literal) return Pattern(nb, nb);
  return Pattern(p.care() & nb, p.want() & nb);
}

BigNat Unifier::pattern_count(const Pattern& pattern, int conditions)
{
  if (conditions < 0 || conditions > kMaxConditions)
  {
    throw std::invalid_argument("nesting beyond configured maximum");
  }
  if (pattern.size() != d_n)
  {
    throw std::invalid_argument("pattern length differs from the example count");
  }
  auto& memo = d_count_memo[conditions];
  if (auto it = memo.find(pattern); it != memo.end()) return it->second;
  BigNat value = compute_count(pattern, conditions);
  memo.emplace(pattern, value);
  return value;
}

BigNat Unifier::compute_count(const Pattern& p, int conditions)
{
  BigNat total = 0;
  if (conditions == 0)
  {
    for (const auto& c : d_maps.clusters())
    {
      if (p.matches(c.vector)) total += c.count;
    }
    return total;
  }
  for (const auto& b : d_bools.clusters())
  {
    BigNat then_count = pattern_count(gamma_then(p, b.values), 0);
    if (then_count == 0) continue;
    BigNat else_count = pattern_count(gamma_else(p, b.values), conditions - 1);
    if (else_count == 0) continue;
    total += b.count * then_count * else_count;
  }
  return total;
}

HypothesisSize Unifier::tier_size(int tier)
{
  if (tier < 0 || tier > kMaxConditions)
  {
    throw std::invalid_argument("tier must be 0, 1 or 2");
  }
  Pattern all = Pattern::all_checked(d_n);
  BigNat total = 0;
  for (int i = 0; i <= tier; ++i) total += pattern_count(all, i);
  return HypothesisSize(std::move(total));
}

const std::optional<Unifier::Candidate>& Unifier::best(const Pattern& p, int conditions)
{
  auto& memo = d_best_memo[conditions];
  if (auto it = memo.find(p); it != memo.end()) return it->second;
  auto value = compute_best(p, conditions);
  return memo.emplace(p, std::move(value)).first->second;
}

std::optional<Unifier::Candidate> Unifier::compute_best(const Pattern& p, int conditions)
{
  std::optional<Candidate> result;
  auto offer = [&](std::size_t size, const Expr& e) {
    if (!result || better(size, e, result->size, result->expr)) result = Candidate{size, e};
  };

  if (conditions == 0)
  {
    for (const auto& c : d_maps.clusters())
    {
      if (!p.matches(c.vector) || c.by_size.empty()) continue;
      const SizedRep& r = c.by_size.front();
      offer(r.size, r.representative);
    }
    return result;
  }
  for (const auto& b : d_bools.clusters())
  {
    if (b.by_size.empty()) continue;
    const auto& then_best = best(gamma_then(p, b.values), 0);
    if (!then_best) continue;
    const auto& else_best = best(gamma_else(p, b.values), conditions - 1);
    if (!else_best) continue;
    const SizedRep& cond = b.by_size.front();
    std::size_t size = cond.size + then_best->size + else_best->size;
    if (result && size > result->size) continue;
    offer(size, Expr::ite(cond.representative, then_best->expr, else_best->expr));
  }
  return result;
}

std::optional<Program> Unifier::unify_pick(int tier)
{
  if (tier < 0 || tier > kMaxConditions)
  {
    throw std::invalid_argument("tier must be 0, 1 or 2");
  }
  Pattern all = Pattern::all_checked(d_n);
  for (int i = 0; i <= tier; ++i)
  {
    const auto& c = best(all, i);
    if (c) return Program{c->expr, i, c->size};
  }
  return std::nullopt;
}

}  // namespace synguar
