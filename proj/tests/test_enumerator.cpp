#include <random>

#include "doctest.h"
#include "support/instances.hpp"
#include "synguar/enumerator.hpp"
#include "synguar/errors.hpp"

using namespace synguar;

namespace {

const Signature kX{{"x", Sort::String}};

// x, "a" and concat only.
std::vector<Component> xa_concat()
{
  auto all = default_component_set({kX, {"a"}, {}, std::vector<std::string>{"concat"}});
  std::vector<Component> out;
  for (auto& c : all)
  {
    if (c.result_sort == Sort::String) out.push_back(std::move(c));
  }
  return out;
}

Env env_x(std::string s)
{
  return Env({{"x", std::move(s)}});
}

std::vector<Value> strings(std::initializer_list<const char*> xs)
{
  std::vector<Value> out;
  for (const char* s : xs) out.emplace_back(std::string(s));
  return out;
}

EnumerationOptions with_size(std::size_t n)
{
  EnumerationOptions o;
  o.max_size = n;
  return o;
}

// Every (sort, values, size, count) cell, for table comparisons.
std::vector<std::string> cells_of(const CountTable& t)
{
  std::vector<std::string> out;
  for (EntryId id = 0; id < t.entry_count(); ++id)
  {
    std::string key = std::string(sort_name(t.sort(id)));
    for (const auto& v : t.values(id)) key += " " + value_text(v);
    for (const auto& c : t.cells(id))
    {
      out.push_back(key + " @" + std::to_string(c.size) + " = " + c.count.str() + " "
                    + pretty(c.representative));
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST_CASE("six programs over x, \"a\" and concat")
{
  auto cs = xa_concat();
  std::vector<Env> inputs{env_x("a")};
  CountTable t = enumerate(cs, inputs, with_size(3));
  CHECK(t.count(Sort::String, strings({"a"}), 1) == 2);
  CHECK(t.count(Sort::String, strings({"aa"}), 3) == 4);
  CHECK(t.count(Sort::String, strings({"aa"}), 2) == 0);
  CHECK(total_count(t, Sort::String, 3) == HypothesisSize(6));
  auto id = t.find(Sort::String, strings({"aa"}));
  REQUIRE(id.has_value());
  CHECK(pretty(t.cell(*id, 3)->representative) == "(concat x x)");
}

TEST_CASE("zero examples put every program on one vector")
{
  CountTable t = enumerate(xa_concat(), {}, with_size(3));
  REQUIRE(t.layer(Sort::String, 1).size() == 1);
  EntryId id = t.layer(Sort::String, 1)[0];
  CHECK(t.values(id).empty());
  CHECK(t.cell(id, 1)->count == 2);
  CHECK(t.cell(id, 3)->count == 4);
  CHECK(t.entry_count() == 1);
}

TEST_CASE("argument checks and caps")
{
  CHECK_THROWS_AS(enumerate(xa_concat(), {}, with_size(0)), std::invalid_argument);
  auto cs = default_component_set({kX, {"a", "b", ","}, {}, std::nullopt});
  EnumerationOptions tight = with_size(5);
  tight.max_entries = 50;
  std::vector<Env> inputs{env_x("ab,c"), env_x("zz")};
  CHECK_THROWS_AS(enumerate(cs, inputs, tight), ResourceCapError);
}

TEST_CASE("representatives reproduce their vectors and are preorder-minimal")
{
  auto cs = default_component_set({kX, {"a", "|"}, {}, std::nullopt});
  std::vector<Env> inputs{env_x("a|b"), env_x("|"), env_x("")};
  CountTable t = enumerate(cs, inputs, with_size(4));

  BruteConfig config;
  config.components = cs;
  config.max_size = 4;
  config.inputs = inputs;
  auto progs = enumerate_straight_line(config);
  std::map<std::tuple<Sort, std::vector<Value>, std::size_t>, Expr> minimal;
  for (std::size_t s = 0; s < progs.size(); ++s)
  {
    for (std::size_t size = 1; size < progs[s].size(); ++size)
    {
      for (const auto& p : progs[s][size])
      {
        std::vector<Value> vals;
        for (const auto& env : inputs) vals.push_back(eval(p, env));
        auto key = std::make_tuple(static_cast<Sort>(s), vals, size);
        auto it = minimal.find(key);
        if (it == minimal.end())
        {
          minimal.emplace(key, p);
        }
        else if (compare_preorder(p, it->second) < 0)
        {
          it->second = p;
        }
      }
    }
  }
  std::size_t checked = 0;
  for (EntryId id = 0; id < t.entry_count(); ++id)
  {
    for (const auto& cell : t.cells(id))
    {
      auto it = minimal.find({t.sort(id), t.values(id), cell.size});
      REQUIRE(it != minimal.end());
      CHECK(pretty(cell.representative) == pretty(it->second));
      ++checked;
    }
  }
  CHECK(checked == minimal.size());
}

TEST_CASE("extending examples matches enumeration from scratch")
{
  auto cs = xa_concat();
  std::vector<Env> first{env_x("a")};
  std::vector<Env> both{env_x("a"), env_x("b")};
  CountTable base = enumerate(cs, first, with_size(3));
  std::vector<Env> added{env_x("b")};
  CHECK(cells_of(extend_examples(base, added)) == cells_of(enumerate(cs, both, with_size(3))));
  CHECK(cells_of(extend_examples(base, {})) == cells_of(base));

  std::mt19937_64 rng(8);
  testing::InstanceLimits limits;
  limits.max_size = 4;
  for (int trial = 0; trial < 60; ++trial)
  {
    auto inst = testing::random_instance(rng, limits);
    std::size_t split =
        std::uniform_int_distribution<std::size_t>(0, inst.inputs.size())(rng);
    std::vector<Env> head(inst.inputs.begin(), inst.inputs.begin() + split);
    std::vector<Env> tail(inst.inputs.begin() + split, inst.inputs.end());
    CountTable part = enumerate(inst.components, head, with_size(inst.max_size));
    INFO(inst.describe());
    CHECK(cells_of(extend_examples(part, tail))
          == cells_of(enumerate(inst.components, inst.inputs, with_size(inst.max_size))));
  }
}

TEST_CASE("examples repartition counts without creating programs")
{
  std::mt19937_64 rng(21);
  testing::InstanceLimits limits;
  for (int trial = 0; trial < 80; ++trial)
  {
    auto inst = testing::random_instance(rng, limits);
    INFO(inst.describe());
    CountTable none = enumerate(inst.components, {}, with_size(inst.max_size));
    CountTable all = enumerate(inst.components, inst.inputs, with_size(inst.max_size));
    for (Sort s : {Sort::String, Sort::Int, Sort::Bool})
    {
      CHECK(total_count(none, s, inst.max_size) == total_count(all, s, inst.max_size));
    }

    // Consistent mass never grows as examples are added.
    BigNat previous = -1;
    for (std::size_t n = 0; n <= inst.inputs.size(); ++n)
    {
      std::vector<Env> prefix(inst.inputs.begin(), inst.inputs.begin() + n);
      std::vector<Value> outs(inst.outputs.begin(), inst.outputs.begin() + n);
      CountTable t = enumerate(inst.components, prefix, with_size(inst.max_size));
      auto id = t.find(inst.result_sort, outs);
      BigNat consistent = 0;
      if (id)
      {
        for (const auto& c : t.cells(*id)) consistent += c.count;
      }
      if (previous >= 0) CHECK(consistent <= previous);
      previous = consistent;
    }
  }
}

TEST_CASE("counts match brute force on random instances")
{
  std::mt19937_64 rng(1234);
  testing::InstanceLimits limits;
  limits.max_nesting = 0;
  for (int trial = 0; trial < 80; ++trial)
  {
    auto inst = testing::random_instance(rng, limits);
    INFO(inst.describe());
    auto issues = testing::compare_with_brute(inst, rng, 0);
    for (const auto& issue : issues) FAIL_CHECK(issue);
  }
}

TEST_CASE("value pool copies own their strings")
{
  ValuePool copy;
  {
    ValuePool original;
    original.intern_string("hello");
    original.intern_int(-4);
    copy = original;
  }
  CHECK(copy.find_string("hello").has_value());
  CHECK(copy.find_int(-4).has_value());
  CHECK_FALSE(copy.find_string("world").has_value());
  auto id = copy.intern_string("world");
  CHECK(copy.string(id) == "world");
  CHECK(copy.decode(Sort::Bool, copy.encode(Value(true))) == Value(true));
}

TEST_CASE("csv dump")
{
  std::vector<Env> inputs{env_x("a")};
  CountTable t = enumerate(xa_concat(), inputs, with_size(2));
  std::string csv = t.to_csv();
  CHECK(csv.rfind("sort,size,count,representative\n", 0) == 0);
}
