#include "synguar/enumerator.hpp"

#include <array>
#include <sstream>
#include <stdexcept>

#include "synguar/errors.hpp"

namespace synguar {

// ---------------------------------------------------------------------------
// ValuePool

// The string index holds views into d_strings, so copies re-point it.
ValuePool::ValuePool(const ValuePool& other)
    : d_strings(other.d_strings), d_ints(other.d_ints), d_int_ids(other.d_int_ids)
{
  for (std::uint32_t id = 0; id < d_strings.size(); ++id)
  {
    d_string_ids.emplace(d_strings[id], id);
  }
}

ValuePool& ValuePool::operator=(const ValuePool& other)
{
  if (this != &other)
  {
    ValuePool copy(other);
    *this = std::move(copy);
  }
  return *this;
}

std::uint32_t ValuePool::intern_string(std::string_view s)
{
  auto it = d_string_ids.find(s);
  if (it != d_string_ids.end()) return it->second;
  auto id = static_cast<std::uint32_t>(d_strings.size());
  d_strings.emplace_back(s);
  d_string_ids.emplace(d_strings.back(), id);
  return id;
}

std::uint32_t ValuePool::intern_int(std::int64_t n)
{
  auto [it, inserted] =
      d_int_ids.emplace(n, static_cast<std::uint32_t>(d_ints.size()));
  if (inserted) d_ints.push_back(n);
  return it->second;
}

std::optional<std::uint32_t> ValuePool::find_string(std::string_view s) const
{
  auto it = d_string_ids.find(s);
  if (it == d_string_ids.end()) return std::nullopt;
  return it->second;
}

std::optional<std::uint32_t> ValuePool::find_int(std::int64_t n) const
{
  auto it = d_int_ids.find(n);
  if (it == d_int_ids.end()) return std::nullopt;
  return it->second;
}

std::uint32_t ValuePool::encode(const Value& v)
{
  if (const auto* s = std::get_if<std::string>(&v)) return intern_string(*s);
  if (const auto* n = std::get_if<std::int64_t>(&v)) return intern_int(*n);
  return std::get<bool>(v) ? 1 : 0;
}

std::optional<std::uint32_t> ValuePool::find(const Value& v) const
{
  if (const auto* s = std::get_if<std::string>(&v)) return find_string(*s);
  if (const auto* n = std::get_if<std::int64_t>(&v)) return find_int(*n);
  return std::get<bool>(v) ? 1u : 0u;
}

Value ValuePool::decode(Sort sort, std::uint32_t slot) const
{
  switch (sort)
  {
    case Sort::String: return std::string(string(slot));
    case Sort::Int: return integer(slot);
    case Sort::Bool: return slot != 0;
  }
  return false;
}

// ---------------------------------------------------------------------------
// CountTable

namespace {

std::uint64_t hash_slots(Sort sort, std::span<const std::uint32_t> slots)
{
  std::uint64_t h = 0xcbf29ce484222325ULL ^ static_cast<std::uint64_t>(sort);
  for (std::uint32_t s : slots)
  {
    h ^= s;
    h *= 0x100000001b3ULL;
    h ^= h >> 29;
  }
  h ^= h >> 32;
  h *= 0x9e3779b97f4a7c15ULL;
  return h ^ (h >> 31);
}

std::string csv_field(const std::string& s)
{
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s)
  {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace

std::vector<Value> CountTable::values(EntryId id) const
{
  const Entry& e = d_entries[id];
  std::vector<Value> out;
  out.reserve(e.slots.size());
  for (std::uint32_t s : e.slots) out.push_back(d_pool.decode(e.sort, s));
  return out;
}

const CountTable::Cell* CountTable::cell(EntryId id, std::size_t size) const
{
  for (const Cell& c : d_entries[id].cells)
  {
    if (c.size == size) return &c;
  }
  return nullptr;
}

std::span<const EntryId> CountTable::layer(Sort sort, std::size_t size) const
{
  if (size == 0 || size > d_options.max_size) return {};
  return d_layers[static_cast<std::size_t>(sort)][size];
}

std::optional<EntryId> CountTable::find(Sort sort, std::span<const Value> values) const
{
  if (values.size() != d_inputs.size()) return std::nullopt;
  std::vector<std::uint32_t> slots;
  slots.reserve(values.size());
  for (const Value& v : values)
  {
    if (sort_of(v) != sort) return std::nullopt;
    auto slot = d_pool.find(v);
    if (!slot) return std::nullopt;
    slots.push_back(*slot);
  }
  if (d_index.empty()) return std::nullopt;
  std::uint64_t h = hash_slots(sort, slots);
  std::size_t mask = d_index.size() - 1;
  for (std::size_t i = h & mask;; i = (i + 1) & mask)
  {
    std::uint32_t ref = d_index[i];
    if (ref == 0) return std::nullopt;
    const Entry& e = d_entries[ref - 1];
    if (e.hash == h && e.sort == sort
        && std::equal(e.slots.begin(), e.slots.end(), slots.begin(), slots.end()))
    {
      return ref - 1;
    }
  }
}

BigNat CountTable::count(Sort sort, std::span<const Value> values, std::size_t size) const
{
  auto id = find(sort, values);
  if (!id) return 0;
  const Cell* c = cell(*id, size);
  return c ? c->count : BigNat(0);
}

std::string CountTable::to_csv() const
{
  std::ostringstream out;
  out << "sort,size,count,representative\n";
  for (EntryId id = 0; id < d_entries.size(); ++id)
  {
    for (const Cell& c : d_entries[id].cells)
    {
      out << sort_name(d_entries[id].sort) << ',' << static_cast<int>(c.size) << ','
          << c.count.str() << ',' << csv_field(pretty(c.representative)) << '\n';
    }
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Enumerator

class Enumerator
{
 public:
  explicit Enumerator(CountTable& table) : d_t(table) {}

  void run()
  {
    const auto& opts = d_t.d_options;
    d_t.d_layers.assign(3, std::vector<std::vector<EntryId>>(opts.max_size + 1));
    d_t.d_index.assign(1024, 0);
    d_out.resize(d_t.d_inputs.size());

    for (const Component& c : d_t.d_components)
    {
      if (c.is_leaf()) add_leaf(c);
    }
    for (std::size_t size = 2; size <= opts.max_size; ++size)
    {
      for (const Component& c : d_t.d_components)
      {
        if (c.is_leaf()) continue;
        if (c.result_sort == Sort::Bool && !opts.include_bool) continue;
        grow(c, size);
      }
    }
  }

 private:
  using Entry = CountTable::Entry;
  using Cell = CountTable::Cell;

  void add_leaf(const Component& c)
  {
    const Expr& leaf = *c.leaf;
    for (std::size_t i = 0; i < d_out.size(); ++i)
    {
      const Value& v = leaf.op() == Op::Input ? d_t.d_inputs[i].value(leaf.input_index())
                                              : leaf.literal_value();
      d_out[i] = d_t.d_pool.encode(v);
    }
    BigNat one = 1;
    add(c.result_sort, 1, one, Op::Input, {}, &leaf);
  }

  void grow(const Component& c, std::size_t size)
  {
    const std::size_t budget = size - 1;
    const auto& s = c.arg_sorts;
    switch (c.arity())
    {
      case 1:
        for (EntryId a : d_t.layer(s[0], budget)) apply(c, size, {{a, budget}});
        break;
      case 2:
        for (std::size_t t1 = 1; t1 < budget; ++t1)
        {
          std::size_t t2 = budget - t1;
          for (EntryId a : d_t.layer(s[0], t1))
          {
            for (EntryId b : d_t.layer(s[1], t2)) apply(c, size, {{a, t1}, {b, t2}});
          }
        }
        break;
      case 3:
        for (std::size_t t1 = 1; t1 + 2 <= budget; ++t1)
        {
          for (std::size_t t2 = 1; t1 + t2 + 1 <= budget; ++t2)
          {
            std::size_t t3 = budget - t1 - t2;
            for (EntryId a : d_t.layer(s[0], t1))
            {
              for (EntryId b : d_t.layer(s[1], t2))
              {
                for (EntryId e : d_t.layer(s[2], t3))
                {
                  apply(c, size, {{a, t1}, {b, t2}, {e, t3}});
                }
              }
            }
          }
        }
        break;
      default: throw std::logic_error("unsupported arity");
    }
  }

  struct Arg
  {
    EntryId id;
    std::size_t size;
  };

  void apply(const Component& c, std::size_t size, std::initializer_list<Arg> args)
  {
    std::array<const Cell*, 3> cells{};
    std::array<const Expr*, 3> reps{};
    std::array<std::span<const std::uint32_t>, 3> slots;
    std::size_t n = 0;
    for (const Arg& a : args)
    {
      cells[n] = d_t.cell(a.id, a.size);
      reps[n] = &cells[n]->representative;
      slots[n] = d_t.d_entries[a.id].slots;
      ++n;
    }
    pointwise(c.op, slots);

    d_product = cells[0]->count;
    for (std::size_t i = 1; i < n; ++i) d_product *= cells[i]->count;
    add(c.result_sort, size, d_product, c.op, std::span<const Expr* const>(reps.data(), n),
        nullptr);
  }

  void pointwise(Op op, const std::array<std::span<const std::uint32_t>, 3>& a)
  {
    ValuePool& p = d_t.d_pool;
    auto str = [&](int k, std::size_t i) { return p.string(a[k][i]); };
    auto num = [&](int k, std::size_t i) { return p.integer(a[k][i]); };
    const std::size_t n = d_out.size();
    for (std::size_t i = 0; i < n; ++i)
    {
      std::uint32_t r;
      switch (op)
      {
        case Op::Concat:
          d_scratch.assign(str(0, i));
          d_scratch.append(str(1, i));
          r = p.intern_string(d_scratch);
          break;
        case Op::Replace:
          r = p.intern_string(prim::replace(str(0, i), str(1, i), str(2, i)));
          break;
        case Op::At: r = p.intern_string(prim::at(str(0, i), num(1, i))); break;
        case Op::Substr:
          r = p.intern_string(prim::substr(str(0, i), num(1, i), num(2, i)));
          break;
        case Op::IntToStr: r = p.intern_string(prim::int_to_str(num(0, i))); break;
        case Op::Plus: r = p.intern_int(prim::plus(num(0, i), num(1, i))); break;
        case Op::Minus: r = p.intern_int(prim::minus(num(0, i), num(1, i))); break;
        case Op::Length: r = p.intern_int(prim::length(str(0, i))); break;
        case Op::StrToInt: r = p.intern_int(prim::str_to_int(str(0, i))); break;
        case Op::IndexOf:
          r = p.intern_int(prim::indexof(str(0, i), str(1, i), num(2, i)));
          break;
        case Op::StrEq: r = a[0][i] == a[1][i]; break;
        case Op::IntLe: r = num(0, i) <= num(1, i); break;
        case Op::PrefixOf: r = prim::prefixof(str(0, i), str(1, i)); break;
        case Op::SuffixOf: r = prim::suffixof(str(0, i), str(1, i)); break;
        case Op::Contains: r = prim::contains(str(0, i), str(1, i)); break;
        default: throw std::logic_error("pointwise on a non-function op");
      }
      d_out[i] = r;
    }
  }

  // Adds `count` programs producing d_out at `size`. The candidate
  // representative is either `leaf` or op(reps...), built only if kept.
  void add(Sort sort, std::size_t size, const BigNat& count, Op op,
           std::span<const Expr* const> reps, const Expr* leaf)
  {
    std::uint64_t h = hash_slots(sort, d_out);
    EntryId id = lookup_or_insert(sort, h);
    Entry& e = d_t.d_entries[id];
    Cell* existing = nullptr;
    if (!e.cells.empty() && e.cells.back().size == size) existing = &e.cells.back();

    auto build = [&]() -> Expr {
      if (leaf) return *leaf;
      std::vector<Expr> children;
      children.reserve(reps.size());
      for (const Expr* r : reps) children.push_back(*r);
      return Expr::apply(op, std::move(children));
    };

    if (!existing)
    {
      e.cells.push_back({static_cast<std::uint8_t>(size), count, build()});
      d_t.d_layers[static_cast<std::size_t>(sort)][size].push_back(id);
      return;
    }
    existing->count += count;
    int cmp = leaf ? compare_preorder(*leaf, existing->representative)
                   : compare_application(op, reps, existing->representative);
    if (cmp < 0) existing->representative = build();
  }

  EntryId lookup_or_insert(Sort sort, std::uint64_t h)
  {
    auto& index = d_t.d_index;
    std::size_t mask = index.size() - 1;
    std::size_t i = h & mask;
    for (;; i = (i + 1) & mask)
    {
      std::uint32_t ref = index[i];
      if (ref == 0) break;
      const Entry& e = d_t.d_entries[ref - 1];
      if (e.hash == h && e.sort == sort
          && std::equal(e.slots.begin(), e.slots.end(), d_out.begin(), d_out.end()))
      {
        return ref - 1;
      }
    }
    if (d_t.d_entries.size() >= d_t.d_options.max_entries)
    {
      throw ResourceCapError("enumeration exceeded the cap of "
                             + std::to_string(d_t.d_options.max_entries)
                             + " distinct value vectors");
    }
    auto id = static_cast<EntryId>(d_t.d_entries.size());
    Entry e{sort, h, d_out, {}};
    // One cell per size at most; keeps Cell pointers stable during growth.
    e.cells.reserve(d_t.d_options.max_size);
    d_t.d_entries.push_back(std::move(e));
    index[i] = id + 1;
    if (2 * d_t.d_entries.size() > index.size()) rehash();
    return id;
  }

  void rehash()
  {
    auto& index = d_t.d_index;
    std::vector<std::uint32_t> bigger(index.size() * 2, 0);
    std::size_t mask = bigger.size() - 1;
    for (std::uint32_t ref : index)
    {
      if (ref == 0) continue;
      std::size_t i = d_t.d_entries[ref - 1].hash & mask;
      while (bigger[i] != 0) i = (i + 1) & mask;
      bigger[i] = ref;
    }
    index = std::move(bigger);
  }

  CountTable& d_t;
  std::vector<std::uint32_t> d_out;
  std::string d_scratch;
  BigNat d_product;
};

CountTable enumerate(std::span<const Component> components, std::span<const Env> inputs,
                     const EnumerationOptions& options)
{
  if (options.max_size == 0)
  {
    throw std::invalid_argument("max_size must be at least 1");
  }
  if (options.max_size > 255)
  {
    throw std::invalid_argument("max_size is limited to 255");
  }
  CountTable table;
  table.d_components.assign(components.begin(), components.end());
  table.d_inputs.assign(inputs.begin(), inputs.end());
  table.d_options = options;
  Enumerator(table).run();
  return table;
}

HypothesisSize total_count(const CountTable& table, Sort sort, std::size_t max_size)
{
  BigNat total = 0;
  for (EntryId id = 0; id < table.entry_count(); ++id)
  {
    if (table.sort(id) != sort) continue;
    for (const auto& c : table.cells(id))
    {
      if (c.size <= max_size) total += c.count;
    }
  }
  return HypothesisSize(std::move(total));
}

CountTable extend_examples(const CountTable& table, std::span<const Env> new_inputs)
{
  if (new_inputs.empty()) return table;
  // Observationally merged programs may split on the new inputs, so the
  // layers are rebuilt over the full list.
  std::vector<Env> all(table.inputs().begin(), table.inputs().end());
  all.insert(all.end(), new_inputs.begin(), new_inputs.end());
  return enumerate(table.components(), all, table.options());
}

}  // namespace synguar
