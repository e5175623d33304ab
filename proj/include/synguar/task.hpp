#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "synguar/dsl.hpp"

namespace synguar {

/// Per-argument relation for multi-input tasks.
struct ArgumentRule
{
  enum class Kind
  {
    /// Drawn from the base distribution.
    Free,
    /// Uniform substring of another string argument.
    SubstringOf,
    /// Integer: uniform in [0, len(source)] or 1..999, each with probability 1/2.
    BoundBy,
  };
  Kind kind = Kind::Free;
  std::string source;
};

struct UniformStringConfig
{
  std::size_t min_len = 8;
  std::size_t max_len = 16;
  /// Expanded character set; ranges like `A-Z` are expanded on load.
  std::string charset;
  /// Weight of ' ' relative to one charset character.
  double whitespace_weight = 15.0;
};

struct MutationConfig
{
  std::vector<std::string> seeds;
  std::size_t max_insert_len = 10;
  double insert_probability = 0.5;
  std::size_t mutations = 1;
};

struct EnumeratedConfig
{
  /// Uniform over these inputs.
  std::vector<Env> domain;
};

struct DistributionConfig
{
  enum class Kind
  {
    UniformString,
    Mutation,
    Enumerated,
  };
  Kind kind = Kind::UniformString;
  UniformStringConfig uniform;
  MutationConfig mutation;
  EnumeratedConfig enumerated;
  /// Keyed by input name; absent inputs are Free.
  std::vector<std::pair<std::string, ArgumentRule>> rules;

  const ArgumentRule* rule(std::string_view input) const;
};

/// `A-Za-z0-9,.-;|` expanded.
std::string default_charset();

struct TaskTarget
{
  enum class Kind
  {
    Dsl,
    Command,
  };
  Kind kind = Kind::Dsl;
  /// Program text or shell command.
  std::string value;
  /// Parsed program for Dsl targets.
  std::optional<Expr> program;
};

struct TaskSpec
{
  std::string name;
  Signature inputs;
  std::vector<std::string> string_constants;
  std::vector<std::int64_t> int_constants;
  /// Function allowlist; all functions when unset.
  std::optional<std::vector<std::string>> components;
  Sort output_sort = Sort::String;
  TaskTarget target;
  DistributionConfig distribution;
  std::size_t max_size = 6;
  int max_nesting = 2;
  double epsilon = 0.05;
  double delta = 0.02;
  std::size_t step_k = 20;

  LanguageConfig language() const;
  /// Whether the input distribution has finite, listed support.
  bool finite_domain() const
  {
    return distribution.kind == DistributionConfig::Kind::Enumerated;
  }
};

/// Throws InputError with a `$.path: message` description on schema errors.
TaskSpec parse_task(const nlohmann::json& j);
TaskSpec load_task(const std::filesystem::path& file);

nlohmann::json value_to_json(const Value& v);
/// Throws InputError naming `path` when `j` is not of sort `sort`.
Value value_from_json(const nlohmann::json& j, Sort sort, const std::string& path);
nlohmann::json env_to_json(const Env& env);
Env env_from_json(const nlohmann::json& j, const Signature& sig, const std::string& path);

nlohmann::json examples_to_json(std::span<const Example> examples);
/// Array of {"inputs": {...}, "output": ...}.
std::vector<Example> examples_from_json(const nlohmann::json& j, const Signature& sig,
                                        Sort output_sort);
std::vector<Example> load_examples(const std::filesystem::path& file,
                                   const Signature& sig, Sort output_sort);

/// Throws InputError at the first example whose output differs from the
/// built-in target's. No-op for command targets.
void check_examples(const TaskSpec& task, std::span<const Example> examples);

}  // namespace synguar
