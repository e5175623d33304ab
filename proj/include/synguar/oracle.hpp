#pragma once

#include <cstdint>
#include <memory>
#include <random>
#include <string_view>

#include "synguar/guarantee.hpp"
#include "synguar/task.hpp"

namespace synguar {

using Rng = std::mt19937_64;

/// Independent stream seed for (seed, label); distinct labels give
/// unrelated streams.
std::uint64_t derive_seed(std::uint64_t seed, std::string_view label);

/// The 94 printable ASCII characters other than space.
std::string_view insert_alphabet();

/// One input drawn from the distribution. Consumes randomness only from `rng`.
Env sample_input(const DistributionConfig& config, const Signature& sig, Rng& rng);

/// The function examples are drawn from.
class Target
{
 public:
  virtual ~Target() = default;
  /// Throws OracleError subclasses on failure.
  virtual Value run(const Env& env) = 0;
};

class DslTarget : public Target
{
 public:
  explicit DslTarget(Expr program) : d_program(std::move(program)) {}
  Value run(const Env& env) override { return eval(d_program, env); }

 private:
  Expr d_program;
};

/// DslTarget or CommandTarget per the task.
std::unique_ptr<Target> make_target(const TaskSpec& task);

/// Pairs `env` with the target's output. OracleErrors raised by the target
/// carry the input as JSON.
Example make_example(Target& target, const Env& env);

/// i.i.d. examples from a distribution and a target.
class SampledSource : public ExampleSource
{
 public:
  SampledSource(const TaskSpec& task, Target& target, std::uint64_t seed);
  Example draw() override;
  std::size_t drawn() const { return d_drawn; }

 private:
  const TaskSpec& d_task;
  Target& d_target;
  Rng d_rng;
  std::size_t d_drawn = 0;
};

}  // namespace synguar
