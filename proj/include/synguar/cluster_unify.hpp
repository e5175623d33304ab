#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "synguar/enumerator.hpp"
#include "synguar/guarantee.hpp"

namespace synguar {

/// Fixed-length bit vector, one bit per example.
class Bits
{
 public:
  Bits() = default;
  explicit Bits(std::size_t n) : d_size(n), d_words((n + 63) / 64, 0) {}
  static Bits ones(std::size_t n);

  std::size_t size() const { return d_size; }
  bool test(std::size_t i) const { return (d_words[i / 64] >> (i % 64)) & 1; }
  void set(std::size_t i, bool on = true)
  {
    std::uint64_t bit = std::uint64_t{1} << (i % 64);
    d_words[i / 64] = on ? (d_words[i / 64] | bit) : (d_words[i / 64] & ~bit);
  }
  std::span<const std::uint64_t> words() const { return d_words; }
  bool all() const;
  bool none() const;

  Bits operator&(const Bits& o) const;
  Bits operator~() const;

  /// '1' for set, '0' for clear.
  std::string to_string() const;
  std::size_t hash() const;

  friend bool operator==(const Bits&, const Bits&) = default;

 private:
  std::size_t d_size = 0;
  std::vector<std::uint64_t> d_words;
};

struct BitsHash
{
  std::size_t operator()(const Bits& b) const { return b.hash(); }
};

/// Entry i set iff the program's output on example i equals the expected one.
using ConsistencyVector = Bits;

/// Succinct set of consistency vectors: each position is ✓, × or ⊤.
class Pattern
{
 public:
  enum class Mark : std::uint8_t
  {
    Check,
    Cross,
    Top,
  };

  Pattern() = default;
  /// `care` marks constrained positions; `want` their required bit.
  Pattern(Bits care, Bits want);
  static Pattern all_checked(std::size_t n);
  static Pattern all_top(std::size_t n);
  /// From text over {'1','0','*'} (✓, ×, ⊤).
  static Pattern parse(std::string_view text);

  std::size_t size() const { return d_care.size(); }
  Mark at(std::size_t i) const;
  bool matches(const ConsistencyVector& c) const;
  const Bits& care() const { return d_care; }
  const Bits& want() const { return d_want; }
  std::string to_string() const;

  friend bool operator==(const Pattern&, const Pattern&) = default;

 private:
  Bits d_care;
  Bits d_want;
};

struct PatternHash
{
  std::size_t operator()(const Pattern& p) const
  {
    return p.care().hash() * 31 + p.want().hash();
  }
};

/// Programs of one size within a cluster: their count and preorder-minimal
/// representative.
struct SizedRep
{
  std::size_t size;
  BigNat count;
  Expr representative;
};

struct Cluster
{
  ConsistencyVector vector;
  /// Σ over members of Count(v, t).
  BigNat count;
  /// (entry, size) pairs covered by this cluster.
  std::vector<std::pair<EntryId, std::size_t>> members;
  /// Ascending by size.
  std::vector<SizedRep> by_size;
};

/// Straight-line programs of the result sort grouped by consistency vector.
class ClusterMaps
{
 public:
  std::size_t num_examples() const { return d_num_examples; }
  std::span<const Cluster> clusters() const { return d_clusters; }
  const Cluster* find(const ConsistencyVector& c) const;
  /// count_c; zero when absent.
  BigNat count(const ConsistencyVector& c) const;

  /// Debug dump: `consistency_vector,count`.
  std::string to_csv() const;

 private:
  friend ClusterMaps cluster(const CountTable&, Sort, std::span<const Value>);
  std::size_t d_num_examples = 0;
  std::vector<Cluster> d_clusters;
  std::unordered_map<Bits, std::size_t, BitsHash> d_index;
};

/// Groups every (v, t) of `result_sort` by its consistency vector against
/// `outputs`. Throws std::invalid_argument on a length mismatch.
ClusterMaps cluster(const CountTable& table, Sort result_sort,
                    std::span<const Value> outputs);

struct BoolCluster
{
  /// Bit i = condition value on example i.
  Bits values;
  /// Σ_t Count(b, t).
  BigNat count;
  std::vector<SizedRep> by_size;
};

class BoolClusters
{
 public:
  std::span<const BoolCluster> clusters() const { return d_clusters; }

 private:
  friend BoolClusters bool_clusters(const CountTable&);
  std::vector<BoolCluster> d_clusters;
};

/// Boolean value vectors partition the condition programs.
BoolClusters bool_clusters(const CountTable& table);

enum class GammaMode
{
  /// Branch constraints follow the enclosing pattern; exact counts.
  Refined,
  /// Branch constraints ignore the enclosing pattern (table form).
  Literal,
};

/// Counts and picks programs with up to two else-nested conditionals.
/// Memoizes per pattern; build a new one whenever the examples change.
class Unifier
{
 public:
  static constexpr int kMaxConditions = 2;

  Unifier(const ClusterMaps& maps, const BoolClusters& bools,
          GammaMode mode = GammaMode::Refined);

  /// Programs with exactly `conditions` conditionals whose consistency
  /// vector matches `pattern`. Throws std::invalid_argument beyond 2.
  BigNat pattern_count(const Pattern& pattern, int conditions);

  /// Consistent programs with at most `tier` conditionals.
  HypothesisSize tier_size(int tier);

  /// Consistent program minimal by (conditions, size, preorder), using at
  /// most `tier` conditionals; nullopt iff tier_size(tier) is 0.
  std::optional<Program> unify_pick(int tier);

  Pattern gamma_then(const Pattern& p, const Bits& b) const;
  Pattern gamma_else(const Pattern& p, const Bits& b) const;

 private:
  struct Candidate
  {
    std::size_t size;
    Expr expr;
  };

  const std::optional<Candidate>& best(const Pattern& p, int conditions);
  std::optional<Candidate> compute_best(const Pattern& p, int conditions);
  BigNat compute_count(const Pattern& p, int conditions);

  const ClusterMaps& d_maps;
  const BoolClusters& d_bools;
  GammaMode d_mode;
  std::size_t d_n;
  std::unordered_map<Pattern, BigNat, PatternHash> d_count_memo[kMaxConditions + 1];
  std::unordered_map<Pattern, std::optional<Candidate>, PatternHash>
      d_best_memo[kMaxConditions + 1];
};

}  // namespace synguar
