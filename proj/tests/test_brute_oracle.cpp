#include <random>
#include <set>

#include "doctest.h"
#include "support/instances.hpp"
#include "synguar/brute_oracle.hpp"
#include "synguar/errors.hpp"

using namespace synguar;

namespace {

const Signature kX{{"x", Sort::String}};

Env env_x(std::string s)
{
  return Env({{"x", std::move(s)}});
}

std::vector<Component> string_components(std::vector<std::string> constants,
                                         std::vector<std::string> functions)
{
  auto all = default_component_set({kX, std::move(constants), {}, std::move(functions)});
  std::vector<Component> out;
  for (auto& c : all)
  {
    if (c.result_sort != Sort::Int) out.push_back(std::move(c));
  }
  return out;
}

std::set<std::string> texts(const std::vector<Expr>& progs)
{
  std::set<std::string> out;
  for (const auto& p : progs) out.insert(pretty(p));
  return out;
}

}  // namespace

TEST_CASE("six programs over x, \"a\" and concat")
{
  BruteConfig config;
  config.components = string_components({"a"}, {"concat"});
  config.max_size = 3;
  auto all = enumerate_all(config);
  CHECK(all.size() == 6);
  CHECK(texts(all) == std::set<std::string>{"x", "\"a\"", "(concat x x)", "(concat x \"a\")",
                                            "(concat \"a\" x)", "(concat \"a\" \"a\")"});
  config.max_size = 1;
  auto leaves = enumerate_all(config);
  CHECK(texts(leaves) == std::set<std::string>{"x", "\"a\""});

  config.max_size = 3;
  config.inputs = {env_x("a")};
  BruteCounts counts = exact_counts(config, std::vector<Value>{std::string("aa")});
  CHECK(counts.tier_consistent[0] == 4);
  CHECK(counts.consistency_count("1") == 4);
  CHECK(counts.consistency_count("0") == 2);
}

TEST_CASE("swap set with one conditional")
{
  BruteConfig config;
  config.components = string_components({"a", "b"}, {"="});
  config.max_size = 3;
  config.max_nesting = 1;
  config.inputs = {env_x("a"), env_x("b")};
  auto all = texts(enumerate_all(config));
  CHECK(all.count("(if (= x \"a\") \"b\" \"a\")") == 1);
  CHECK(all.count("(if (= x \"b\") \"a\" \"b\")") == 1);

  config.domain = config.inputs;
  std::vector<Value> outs{std::string("b"), std::string("a")};
  BruteCounts counts = exact_counts(config, outs);
  CHECK(counts.tier_consistent[0] == 0);
  CHECK(counts.tier_consistent[1] == 4);
  REQUIRE(counts.semantic_consistent.has_value());
  CHECK((*counts.semantic_consistent)[0] == 0);
  CHECK((*counts.semantic_consistent)[1] == 1);
}

TEST_CASE("zero examples make every program consistent")
{
  BruteConfig config;
  config.components = string_components({"a", "|"}, {"concat", "contains"});
  config.max_size = 3;
  config.max_nesting = 2;
  BruteCounts counts = exact_counts(config, {});
  for (std::size_t t = 0; t < 3; ++t) CHECK(counts.tier_consistent[t] == counts.tier_total[t]);
}

TEST_CASE("limits")
{
  BruteConfig config;
  config.components = default_component_set({kX, {"a", "b", "c"}, {}, std::nullopt});
  config.max_size = 7;
  CHECK_THROWS_AS(estimate_programs(config), std::invalid_argument);
  config.max_size = 3;
  config.max_nesting = 3;
  CHECK_THROWS_AS(estimate_programs(config), std::invalid_argument);
  config.max_nesting = 1;
  config.max_size = 6;
  config.cap = 1000;
  try
  {
    enumerate_all(config);
    FAIL("expected a cap refusal");
  }
  catch (const ResourceCapError& e)
  {
    CHECK(std::string(e.what()).find("above the cap of 1000") != std::string::npos);
  }
  CHECK_THROWS_AS(exact_counts(config, std::vector<Value>{std::string("x")}),
                  std::invalid_argument);
}

TEST_CASE("enumeration is duplicate-free and matches the estimate")
{
  std::mt19937_64 rng(64);
  testing::InstanceLimits limits;
  limits.max_nesting = 2;
  limits.max_size = 3;
  limits.max_programs = 60;
  for (int trial = 0; trial < 80; ++trial)
  {
    auto inst = testing::random_instance(rng, limits);
    BruteConfig config;
    config.components = inst.components;
    config.max_size = inst.max_size;
    config.max_nesting = inst.nesting;
    config.result_sort = inst.result_sort;
    config.cap = 500'000;
    BruteEstimate est = estimate_programs(config);
    BigNat expected = 0;
    for (const auto& n : est.by_conditions) expected += n;
    if (expected > config.cap) continue;
    auto all = enumerate_all(config);
    INFO(inst.describe());
    CHECK(BigNat(all.size()) == expected);
    CHECK(texts(all).size() == all.size());
  }
}

TEST_CASE("grouped counts agree with direct evaluation of every program")
{
  std::mt19937_64 rng(65);
  testing::InstanceLimits limits;
  limits.max_nesting = 2;
  limits.max_size = 3;
  limits.max_programs = 60;
  int checked = 0;
  for (int trial = 0; trial < 80; ++trial)
  {
    auto inst = testing::random_instance(rng, limits);
    BruteConfig config;
    config.components = inst.components;
    config.max_size = inst.max_size;
    config.max_nesting = inst.nesting;
    config.result_sort = inst.result_sort;
    config.inputs = inst.inputs;
    config.cap = 300'000;
    std::vector<Expr> all;
    try
    {
      all = enumerate_all(config);
    }
    catch (const ResourceCapError&)
    {
      continue;
    }
    BruteCounts counts = exact_counts(config, inst.outputs);
    std::vector<std::map<std::string, BigNat>> direct(
        static_cast<std::size_t>(inst.nesting) + 1);
    for (const auto& e : all)
    {
      direct[static_cast<std::size_t>(e.conditions())][testing::consistency_text(e, inst)] += 1;
    }
    INFO(inst.describe());
    for (std::size_t i = 0; i < direct.size(); ++i)
    {
      auto grouped = counts.by_consistency[i];
      std::erase_if(grouped, [](const auto& kv) { return kv.second == 0; });
      CHECK(grouped == direct[i]);
    }
    ++checked;
  }
  CHECK(checked > 40);
}
