#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "synguar/dsl.hpp"
#include "synguar/hypothesis_size.hpp"

namespace synguar {

/// Exhaustive reference for program counts on tiny instances.
struct BruteConfig
{
  std::vector<Component> components;
  /// Bound on each straight-line part (condition, branch); at most 6.
  std::size_t max_size = 3;
  /// Else-only nesting depth; at most 2.
  int max_nesting = 0;
  Sort result_sort = Sort::String;
  std::vector<Env> inputs;
  /// Finite input domain for semantic deduplication.
  std::optional<std::vector<Env>> domain;
  /// Refuse when the estimated number of materialized programs exceeds this.
  std::uint64_t cap = 10'000'000;
};

/// Programs per (sort, size) and per conditional shape, computed from the
/// component signatures alone.
struct BruteEstimate
{
  BigNat straight_line;
  /// [i]: programs of the result sort with exactly i conditionals.
  std::vector<BigNat> by_conditions;
};

/// Throws std::invalid_argument when max_size > 6 or max_nesting > 2.
BruteEstimate estimate_programs(const BruteConfig& config);

/// Every distinct well-sorted program of the result sort with component
/// size <= max_size per straight-line part and up to max_nesting else-nested
/// conditionals. Throws ResourceCapError beyond the cap.
std::vector<Expr> enumerate_all(const BruteConfig& config);

/// Every straight-line program of every sort, grouped as [sort][size].
std::vector<std::vector<std::vector<Expr>>> enumerate_straight_line(const BruteConfig& config);

struct BruteCounts
{
  using VectorKey = std::tuple<Sort, std::vector<Value>, std::size_t>;

  /// Count(v, t) for straight-line programs of every sort.
  std::map<VectorKey, BigNat> per_vector;
  /// [i]: programs of the result sort with exactly i conditionals, keyed by
  /// consistency vector over {1,0}.
  std::vector<std::map<std::string, BigNat>> by_consistency;
  /// [t]: consistent programs with at most t conditionals.
  std::vector<BigNat> tier_consistent;
  /// [t]: all programs with at most t conditionals.
  std::vector<BigNat> tier_total;
  /// [t]: distinct functions over the domain among consistent programs with
  /// at most t conditionals. Set only when the config has a domain.
  std::optional<std::vector<std::uint64_t>> semantic_consistent;

  /// Programs with exactly `conditions` conditionals matching a pattern over
  /// {'1','0','*'}.
  BigNat pattern_count(std::string_view pattern, int conditions) const;
  /// count_c for straight-line programs.
  BigNat consistency_count(std::string_view vector) const;
};

/// Counts by evaluating every straight-line program with eval() and
/// combining conditionals pointwise. Throws ResourceCapError beyond the cap
/// and std::invalid_argument when outputs and inputs differ in length.
BruteCounts exact_counts(const BruteConfig& config, std::span<const Value> outputs);

}  // namespace synguar
