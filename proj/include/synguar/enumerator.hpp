#pragma once

#include <cstddef>
#include <cstdint>
#include <deque>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "synguar/dsl.hpp"
#include "synguar/hypothesis_size.hpp"

namespace synguar {

/// Interns strings and integers as dense 32-bit ids so value vectors are flat
/// arrays. Booleans are stored directly as 0/1.
class ValuePool
{
 public:
  ValuePool() = default;
  ValuePool(const ValuePool& other);
  ValuePool& operator=(const ValuePool& other);
  ValuePool(ValuePool&&) noexcept = default;
  ValuePool& operator=(ValuePool&&) noexcept = default;

  std::uint32_t intern_string(std::string_view s);
  std::uint32_t intern_int(std::int64_t n);
  std::optional<std::uint32_t> find_string(std::string_view s) const;
  std::optional<std::uint32_t> find_int(std::int64_t n) const;

  std::string_view string(std::uint32_t id) const { return d_strings[id]; }
  std::int64_t integer(std::uint32_t id) const { return d_ints[id]; }

  /// Slot encoding of a value, interning as needed.
  std::uint32_t encode(const Value& v);
  /// Slot encoding without interning; nullopt when the value was never seen.
  std::optional<std::uint32_t> find(const Value& v) const;
  Value decode(Sort sort, std::uint32_t slot) const;

 private:
  std::deque<std::string> d_strings;
  std::unordered_map<std::string_view, std::uint32_t> d_string_ids;
  std::vector<std::int64_t> d_ints;
  std::unordered_map<std::int64_t, std::uint32_t> d_int_ids;
};

using EntryId = std::uint32_t;

struct EnumerationOptions
{
  std::size_t max_size = 6;
  /// Abort with ResourceCapError beyond this many distinct value vectors.
  std::size_t max_entries = 3'000'000;
  /// Boolean programs are never arguments, so they can be skipped when only
  /// straight-line results are needed.
  bool include_bool = true;
};

/// Exact program counts per (value vector, component size), with the
/// preorder-minimal representative program of each cell.
class CountTable
{
 public:
  struct Cell
  {
    std::uint8_t size;
    BigNat count;
    Expr representative;
  };

  std::size_t max_size() const { return d_options.max_size; }
  std::size_t num_examples() const { return d_inputs.size(); }
  std::span<const Env> inputs() const { return d_inputs; }
  std::span<const Component> components() const { return d_components; }
  const EnumerationOptions& options() const { return d_options; }
  const ValuePool& pool() const { return d_pool; }

  std::size_t entry_count() const { return d_entries.size(); }
  Sort sort(EntryId id) const { return d_entries[id].sort; }
  std::span<const std::uint32_t> slots(EntryId id) const { return d_entries[id].slots; }
  std::vector<Value> values(EntryId id) const;
  /// Cells present for an entry, ascending by size. Every count is >= 1.
  std::span<const Cell> cells(EntryId id) const { return d_entries[id].cells; }
  const Cell* cell(EntryId id, std::size_t size) const;

  /// Entries with a nonzero count at exactly `size`.
  std::span<const EntryId> layer(Sort sort, std::size_t size) const;

  std::optional<EntryId> find(Sort sort, std::span<const Value> values) const;
  /// Count(v, t); zero when absent.
  BigNat count(Sort sort, std::span<const Value> values, std::size_t size) const;

  /// Debug dump: `sort,size,count,representative`.
  std::string to_csv() const;

 private:
  friend class Enumerator;
  friend CountTable enumerate(std::span<const Component>, std::span<const Env>,
                              const EnumerationOptions&);

  struct Entry
  {
    Sort sort;
    std::uint64_t hash;
    std::vector<std::uint32_t> slots;
    std::vector<Cell> cells;
  };

  std::vector<Component> d_components;
  std::vector<Env> d_inputs;
  EnumerationOptions d_options;
  ValuePool d_pool;
  std::vector<Entry> d_entries;
  /// Open-addressed: EntryId + 1, 0 for empty.
  std::vector<std::uint32_t> d_index;
  /// [sort][size] -> entries
  std::vector<std::vector<std::vector<EntryId>>> d_layers;
};

/// Bottom-up enumeration by component size with observational equivalence.
/// Throws std::invalid_argument when max_size is 0 and ResourceCapError when
/// the entry cap is exceeded.
CountTable enumerate(std::span<const Component> components,
                     std::span<const Env> inputs, const EnumerationOptions& options);

/// Sum of counts over every vector of `sort` at sizes <= max_size.
HypothesisSize total_count(const CountTable& table, Sort sort, std::size_t max_size);

/// The table for the example list extended by `new_inputs`; identical to
/// enumerating the concatenated list from scratch.
CountTable extend_examples(const CountTable& table, std::span<const Env> new_inputs);

}  // namespace synguar
