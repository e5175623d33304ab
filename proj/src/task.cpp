#include "synguar/task.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include "synguar/errors.hpp"

namespace synguar {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& message)
{
  throw InputError(path + ": " + message);
}

std::string child(const std::string& path, std::string_view key)
{
  return path + "." + std::string(key);
}

std::string index(const std::string& path, std::size_t i)
{
  return path + "[" + std::to_string(i) + "]";
}

const json& require(const json& obj, std::string_view key, const std::string& path)
{
  auto it = obj.find(key);
  if (it == obj.end()) fail(child(path, key), "missing required field");
  return *it;
}

const json* optional_field(const json& obj, std::string_view key)
{
  auto it = obj.find(key);
  return it == obj.end() || it->is_null() ? nullptr : &*it;
}

void expect_object(const json& j, const std::string& path)
{
  if (!j.is_object()) fail(path, "expected an object");
}

void expect_array(const json& j, const std::string& path)
{
  if (!j.is_array()) fail(path, "expected an array");
}

std::string as_string(const json& j, const std::string& path)
{
  if (!j.is_string()) fail(path, "expected a string");
  return j.get<std::string>();
}

std::int64_t as_int(const json& j, const std::string& path)
{
  if (!j.is_number_integer()) fail(path, "expected an integer");
  if (j.is_number_unsigned() && j.get<std::uint64_t>() > INT64_MAX)
  {
    fail(path, "integer out of range");
  }
  return j.get<std::int64_t>();
}

std::size_t as_size(const json& j, const std::string& path, std::size_t min,
                    std::size_t max)
{
  std::int64_t v = as_int(j, path);
  if (v < static_cast<std::int64_t>(min) || static_cast<std::uint64_t>(v) > max)
  {
    fail(path, "expected an integer in [" + std::to_string(min) + ", "
                   + std::to_string(max) + "]");
  }
  return static_cast<std::size_t>(v);
}

double as_double(const json& j, const std::string& path)
{
  if (!j.is_number()) fail(path, "expected a number");
  return j.get<double>();
}

std::string expand_charset(std::string_view spec)
{
  auto same_class = [](char a, char b) {
    auto cls = [](char c) {
      if (c >= 'a' && c <= 'z') return 1;
      if (c >= 'A' && c <= 'Z') return 2;
      if (c >= '0' && c <= '9') return 3;
      return 0;
    };
    return cls(a) != 0 && cls(a) == cls(b) && a <= b;
  };
  std::string out;
  auto push = [&out](char c) {
    if (out.find(c) == std::string::npos) out.push_back(c);
  };
  for (std::size_t i = 0; i < spec.size(); ++i)
  {
    if (i + 2 < spec.size() && spec[i + 1] == '-' && same_class(spec[i], spec[i + 2]))
    {
      for (char c = spec[i]; c <= spec[i + 2]; ++c) push(c);
      i += 2;
    }
    else
    {
      push(spec[i]);
    }
  }
  return out;
}

Signature parse_inputs(const json& j, const std::string& path)
{
  expect_array(j, path);
  if (j.empty()) fail(path, "task has no inputs");
  Signature sig;
  std::set<std::string> seen;
  for (std::size_t i = 0; i < j.size(); ++i)
  {
    std::string p = index(path, i);
    expect_object(j[i], p);
    std::string name = as_string(require(j[i], "name", p), child(p, "name"));
    if (!valid_input_name(name)) fail(child(p, "name"), "invalid input name '" + name + "'");
    if (!seen.insert(name).second) fail(child(p, "name"), "duplicate input '" + name + "'");
    std::string sort_text = as_string(require(j[i], "sort", p), child(p, "sort"));
    auto sort = parse_sort(sort_text);
    if (!sort || *sort == Sort::Bool)
    {
      fail(child(p, "sort"), "input sort must be \"string\" or \"int\"");
    }
    sig.push_back({name, *sort});
  }
  return sig;
}

const InputDecl* find_input(const Signature& sig, std::string_view name)
{
  for (const auto& d : sig)
  {
    if (d.name == name) return &d;
  }
  return nullptr;
}

std::vector<std::pair<std::string, ArgumentRule>> parse_rules(const json* j,
                                                              const Signature& sig,
                                                              const std::string& path)
{
  std::vector<std::pair<std::string, ArgumentRule>> rules;
  if (!j) return rules;
  expect_object(*j, path);
  for (const auto& decl : sig)
  {
    auto it = j->find(decl.name);
    if (it == j->end()) continue;
    std::string p = child(path, decl.name);
    expect_object(*it, p);
    ArgumentRule rule;
    if (const json* s = optional_field(*it, "substring_of"))
    {
      rule.kind = ArgumentRule::Kind::SubstringOf;
      rule.source = as_string(*s, child(p, "substring_of"));
    }
    else if (const json* b = optional_field(*it, "bound_by"))
    {
      rule.kind = ArgumentRule::Kind::BoundBy;
      rule.source = as_string(*b, child(p, "bound_by"));
    }
    else
    {
      fail(p, "expected \"substring_of\" or \"bound_by\"");
    }
    const InputDecl* src = find_input(sig, rule.source);
    if (!src || src->name == decl.name || src->sort != Sort::String)
    {
      fail(p, "source must be another string input");
    }
    if (rule.kind == ArgumentRule::Kind::SubstringOf && decl.sort != Sort::String)
    {
      fail(p, "substring_of applies to string inputs");
    }
    if (rule.kind == ArgumentRule::Kind::BoundBy && decl.sort != Sort::Int)
    {
      fail(p, "bound_by applies to integer inputs");
    }
    rules.emplace_back(decl.name, rule);
  }
  for (const auto& [key, _] : j->items())
  {
    if (!find_input(sig, key)) fail(child(path, key), "unknown input");
  }
  for (const auto& [name, rule] : rules)
  {
    for (const auto& [other, other_rule] : rules)
    {
      if (other == rule.source && other_rule.kind == ArgumentRule::Kind::SubstringOf)
      {
        fail(child(path, name), "source must not itself be a substring argument");
      }
    }
  }
  return rules;
}

DistributionConfig parse_distribution(const json& j, const Signature& sig,
                                      const std::vector<std::string>& seeds,
                                      const std::string& path)
{
  expect_object(j, path);
  DistributionConfig d;
  std::string kind = as_string(require(j, "kind", path), child(path, "kind"));
  json empty = json::object();
  const json* params_ptr = optional_field(j, "params");
  const json& params = params_ptr ? *params_ptr : empty;
  std::string pp = child(path, "params");
  expect_object(params, pp);

  if (kind == "uniform_string")
  {
    d.kind = DistributionConfig::Kind::UniformString;
    auto& u = d.uniform;
    if (const json* v = optional_field(params, "min_len"))
    {
      u.min_len = as_size(*v, child(pp, "min_len"), 0, 1'000'000);
    }
    if (const json* v = optional_field(params, "max_len"))
    {
      u.max_len = as_size(*v, child(pp, "max_len"), 0, 1'000'000);
    }
    if (u.min_len > u.max_len) fail(child(pp, "min_len"), "min_len exceeds max_len");
    u.charset = default_charset();
    if (const json* v = optional_field(params, "charset"))
    {
      u.charset = expand_charset(as_string(*v, child(pp, "charset")));
      if (u.charset.empty()) fail(child(pp, "charset"), "charset is empty");
    }
    if (const json* v = optional_field(params, "whitespace_weight"))
    {
      u.whitespace_weight = as_double(*v, child(pp, "whitespace_weight"));
      if (!(u.whitespace_weight > 0))
      {
        fail(child(pp, "whitespace_weight"), "weight must be positive");
      }
    }
  }
  else if (kind == "mutation")
  {
    d.kind = DistributionConfig::Kind::Mutation;
    auto& m = d.mutation;
    if (seeds.empty()) fail("$.seeds", "the mutation distribution needs at least one seed");
    m.seeds = seeds;
    if (const json* v = optional_field(params, "max_insert_len"))
    {
      m.max_insert_len = as_size(*v, child(pp, "max_insert_len"), 1, 1'000'000);
    }
    if (const json* v = optional_field(params, "insert_probability"))
    {
      m.insert_probability = as_double(*v, child(pp, "insert_probability"));
      if (!(m.insert_probability >= 0 && m.insert_probability <= 1))
      {
        fail(child(pp, "insert_probability"), "expected a probability");
      }
    }
    if (const json* v = optional_field(params, "mutations"))
    {
      m.mutations = as_size(*v, child(pp, "mutations"), 1, 1000);
    }
  }
  else if (kind == "enumerated")
  {
    d.kind = DistributionConfig::Kind::Enumerated;
    std::string dp = child(pp, "domain");
    const json& domain = require(params, "domain", pp);
    expect_array(domain, dp);
    if (domain.empty()) fail(dp, "domain is empty");
    for (std::size_t i = 0; i < domain.size(); ++i)
    {
      d.enumerated.domain.push_back(env_from_json(domain[i], sig, index(dp, i)));
    }
  }
  else
  {
    fail(child(path, "kind"),
         "expected \"uniform_string\", \"mutation\" or \"enumerated\"");
  }
  d.rules = parse_rules(optional_field(params, "arguments"), sig, child(pp, "arguments"));
  return d;
}

}  // namespace

const ArgumentRule* DistributionConfig::rule(std::string_view input) const
{
  for (const auto& [name, r] : rules)
  {
    if (name == input) return &r;
  }
  return nullptr;
}

std::string default_charset()
{
  return expand_charset("A-Za-z0-9,.-;|");
}

LanguageConfig TaskSpec::language() const
{
  return LanguageConfig{inputs, string_constants, int_constants, components};
}

TaskSpec parse_task(const json& j)
{
  const std::string root = "$";
  expect_object(j, root);
  TaskSpec t;
  t.name = as_string(require(j, "name", root), "$.name");
  if (t.name.empty()) fail("$.name", "name is empty");
  t.inputs = parse_inputs(require(j, "inputs", root), "$.inputs");

  if (const json* v = optional_field(j, "string_constants"))
  {
    expect_array(*v, "$.string_constants");
    for (std::size_t i = 0; i < v->size(); ++i)
    {
      t.string_constants.push_back(as_string((*v)[i], index("$.string_constants", i)));
    }
  }
  if (const json* v = optional_field(j, "int_constants"))
  {
    expect_array(*v, "$.int_constants");
    for (std::size_t i = 0; i < v->size(); ++i)
    {
      t.int_constants.push_back(as_int((*v)[i], index("$.int_constants", i)));
    }
  }
  if (const json* v = optional_field(j, "components"))
  {
    expect_array(*v, "$.components");
    std::vector<std::string> names;
    for (std::size_t i = 0; i < v->size(); ++i)
    {
      std::string p = index("$.components", i);
      names.push_back(as_string((*v)[i], p));
      if (!function_by_name(names.back()))
      {
        fail(p, "unknown component '" + names.back() + "'");
      }
    }
    t.components = std::move(names);
  }
  if (const json* v = optional_field(j, "output_sort"))
  {
    auto sort = parse_sort(as_string(*v, "$.output_sort"));
    if (!sort) fail("$.output_sort", "expected \"string\", \"int\" or \"bool\"");
    t.output_sort = *sort;
  }

  const json& target = require(j, "target", root);
  expect_object(target, "$.target");
  std::string kind = as_string(require(target, "kind", "$.target"), "$.target.kind");
  t.target.value = as_string(require(target, "value", "$.target"), "$.target.value");
  if (kind == "dsl")
  {
    t.target.kind = TaskTarget::Kind::Dsl;
    try
    {
      t.target.program = parse_expr(t.target.value, t.inputs);
    }
    catch (const ParseError& e)
    {
      fail("$.target.value", e.what());
    }
    if (t.target.program->sort() != t.output_sort)
    {
      fail("$.target.value", "target sort differs from output_sort");
    }
  }
  else if (kind == "command")
  {
    t.target.kind = TaskTarget::Kind::Command;
    if (t.target.value.empty()) fail("$.target.value", "command is empty");
  }
  else
  {
    fail("$.target.kind", "expected \"dsl\" or \"command\"");
  }

  std::vector<std::string> seeds;
  if (const json* v = optional_field(j, "seeds"))
  {
    expect_array(*v, "$.seeds");
    for (std::size_t i = 0; i < v->size(); ++i)
    {
      seeds.push_back(as_string((*v)[i], index("$.seeds", i)));
    }
  }
  t.distribution =
      parse_distribution(require(j, "distribution", root), t.inputs, seeds, "$.distribution");

  if (const json* v = optional_field(j, "limits"))
  {
    expect_object(*v, "$.limits");
    if (const json* m = optional_field(*v, "max_size"))
    {
      t.max_size = as_size(*m, "$.limits.max_size", 1, 255);
    }
    if (const json* m = optional_field(*v, "max_nesting"))
    {
      t.max_nesting = static_cast<int>(as_size(*m, "$.limits.max_nesting", 0, 2));
    }
  }
  if (const json* v = optional_field(j, "guarantee"))
  {
    expect_object(*v, "$.guarantee");
    if (const json* e = optional_field(*v, "epsilon"))
    {
      t.epsilon = as_double(*e, "$.guarantee.epsilon");
      if (!(t.epsilon > 0 && t.epsilon < 1)) fail("$.guarantee.epsilon", "must lie in (0,1)");
    }
    if (const json* d = optional_field(*v, "delta"))
    {
      t.delta = as_double(*d, "$.guarantee.delta");
      if (!(t.delta > 0 && t.delta < 1)) fail("$.guarantee.delta", "must lie in (0,1)");
    }
    if (const json* k = optional_field(*v, "k"))
    {
      t.step_k = as_size(*k, "$.guarantee.k", 1, 1'000'000);
    }
  }
  return t;
}

TaskSpec load_task(const std::filesystem::path& file)
{
  std::ifstream in(file);
  if (!in) throw InputError(file.string() + ": cannot open task file");
  json j;
  try
  {
    j = json::parse(in);
  }
  catch (const json::parse_error& e)
  {
    throw InputError(file.string() + ": invalid JSON: " + e.what());
  }
  try
  {
    return parse_task(j);
  }
  catch (const InputError& e)
  {
    throw InputError(file.string() + ": " + e.what());
  }
}

json value_to_json(const Value& v)
{
  if (const auto* s = std::get_if<std::string>(&v)) return *s;
  if (const auto* n = std::get_if<std::int64_t>(&v)) return *n;
  return std::get<bool>(v);
}

Value value_from_json(const json& j, Sort sort, const std::string& path)
{
  switch (sort)
  {
    case Sort::String:
      return as_string(j, path);
    case Sort::Int:
      return as_int(j, path);
    case Sort::Bool:
      if (!j.is_boolean()) fail(path, "expected a boolean");
      return j.get<bool>();
  }
  fail(path, "unknown sort");
}

json env_to_json(const Env& env)
{
  json obj = json::object();
  for (std::size_t i = 0; i < env.size(); ++i) obj[env.name(i)] = value_to_json(env.value(i));
  return obj;
}

Env env_from_json(const json& j, const Signature& sig, const std::string& path)
{
  expect_object(j, path);
  Env env;
  for (const auto& d : sig)
  {
    env.bind(d.name, value_from_json(require(j, d.name, path), d.sort, child(path, d.name)));
  }
  for (const auto& [key, _] : j.items())
  {
    if (!find_input(sig, key)) fail(child(path, key), "unknown input");
  }
  return env;
}

json examples_to_json(std::span<const Example> examples)
{
  json arr = json::array();
  for (const auto& e : examples)
  {
    arr.push_back({{"inputs", env_to_json(e.inputs)}, {"output", value_to_json(e.output)}});
  }
  return arr;
}

std::vector<Example> examples_from_json(const json& j, const Signature& sig,
                                        Sort output_sort)
{
  expect_array(j, "$");
  std::vector<Example> out;
  for (std::size_t i = 0; i < j.size(); ++i)
  {
    std::string p = index("$", i);
    expect_object(j[i], p);
    Example e;
    e.inputs = env_from_json(require(j[i], "inputs", p), sig, child(p, "inputs"));
    e.output = value_from_json(require(j[i], "output", p), output_sort, child(p, "output"));
    out.push_back(std::move(e));
  }
  return out;
}

std::vector<Example> load_examples(const std::filesystem::path& file,
                                   const Signature& sig, Sort output_sort)
{
  std::ifstream in(file);
  if (!in) throw InputError(file.string() + ": cannot open example file");
  try
  {
    return examples_from_json(json::parse(in), sig, output_sort);
  }
  catch (const json::parse_error& e)
  {
    throw InputError(file.string() + ": invalid JSON: " + e.what());
  }
  catch (const InputError& e)
  {
    throw InputError(file.string() + ": " + e.what());
  }
}

void check_examples(const TaskSpec& task, std::span<const Example> examples)
{
  if (!task.target.program) return;
  for (std::size_t i = 0; i < examples.size(); ++i)
  {
    if (eval(*task.target.program, examples[i].inputs) != examples[i].output)
    {
      fail(index("$", i) + ".output", "differs from the target's output");
    }
  }
}

}  // namespace synguar
