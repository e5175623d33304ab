#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "synguar/dsl.hpp"
#include "synguar/hypothesis_size.hpp"

namespace synguar {

/// Error tolerance, failure probability and sampling step.
class GuaranteeParams
{
 public:
  /// Throws std::invalid_argument unless 0 < epsilon, delta < 1 and step_k >= 1.
  GuaranteeParams(double epsilon, double delta, std::size_t step_k);

  double epsilon() const { return d_epsilon; }
  double delta() const { return d_delta; }
  std::size_t step_k() const { return d_step_k; }

  /// Largest step for which the default stopping function is within 2x of
  /// the best monotone one: floor(ln(1/delta) / (2 epsilon)).
  std::size_t optimality_step_bound() const;
  /// Whether step_k <= optimality_step_bound().
  bool within_optimality_bound() const { return d_within_bound; }

  GuaranteeParams with_delta(double delta) const
  {
    return GuaranteeParams(d_epsilon, delta, d_step_k);
  }

 private:
  double d_epsilon;
  double d_delta;
  std::size_t d_step_k;
  bool d_within_bound;
};

/// Smallest integer m > (ln size + ln(1/delta)) / epsilon, using an upper
/// bound for ln size. Throws std::domain_error when size is 0.
std::uint64_t sample_complexity(const HypothesisSize& size, double epsilon,
                                double delta);

/// ceil(max{0, (ln size - ln(1/delta)) / epsilon}). Requires size >= 1.
std::uint64_t default_g(const HypothesisSize& size, double epsilon, double delta);

/// Monotone non-decreasing map from hypothesis size to a sampling threshold.
using StoppingFunction = std::function<std::uint64_t(const HypothesisSize&)>;

StoppingFunction default_stopping(double epsilon, double delta);

/// A synthesized program with its metadata.
struct Program
{
  Expr expr;
  /// Number of conditionals.
  int tier = 0;
  std::size_t size = 0;
};

/// Produces i.i.d. examples. Replay sources throw OracleExhausted when empty.
class ExampleSource
{
 public:
  virtual ~ExampleSource() = default;
  virtual Example draw() = 0;
};

/// Replays a fixed list of examples, then throws OracleExhausted.
class ReplaySource : public ExampleSource
{
 public:
  explicit ReplaySource(std::vector<Example> examples)
      : d_examples(std::move(examples))
  {
  }
  Example draw() override;
  std::size_t consumed() const { return d_next; }

 private:
  std::vector<Example> d_examples;
  std::size_t d_next = 0;
};

/// A synthesizer whose hypothesis space can be restricted by examples and
/// sized.
class SynthesisEngine
{
 public:
  virtual ~SynthesisEngine() = default;
  /// Restricts the space to programs consistent with `examples` (the full
  /// list seen so far, not a delta). An empty list resets the engine.
  virtual void update_hypothesis(std::span<const Example> examples) = 0;
  /// Sound upper bound on the consistent space.
  virtual HypothesisSize compute_size() = 0;
  /// Some consistent program, or nullopt iff the space is empty.
  virtual std::optional<Program> pick_program() = 0;
};

enum class Phase
{
  Sampling,
  Validation,
};

std::string_view phase_name(Phase p);

struct TraceRow
{
  std::size_t iteration = 0;
  std::size_t samples_seen = 0;
  int tier = 0;
  HypothesisSize size_upper;
  std::uint64_t threshold = 0;
  Phase phase = Phase::Sampling;
};

/// CSV header and rows; size_upper in plain decimal.
std::string trace_csv(std::span<const TraceRow> rows);

struct LoopState
{
  std::size_t samples_seen = 0;
  std::uint64_t threshold = 0;
  std::vector<Example> examples;
  int tier = 0;
  std::vector<TraceRow> trace;
};

struct SynthesisOutcome
{
  std::optional<Program> result;
  /// Examples drawn from the oracle over the whole run.
  std::size_t total_samples = 0;
  /// Size of the fresh validation set of the deciding tier.
  std::size_t validation_samples = 0;
};

struct RunResult
{
  SynthesisOutcome outcome;
  LoopState state;
};

/// Two-phase sampling/validation loop on one hypothesis space. `prior`
/// examples are consumed before fresh draws during sampling; any left over
/// join the validation update alongside m fresh draws.
RunResult run_synguar(ExampleSource& oracle, SynthesisEngine& engine,
                      const GuaranteeParams& params, const StoppingFunction& g,
                      int tier = 0, std::span<const Example> prior = {});

/// Runs H0, H1, H2 in order with delta/3 each, carrying drawn examples
/// forward. The trace covers every tier that ran.
RunResult run_tiered(ExampleSource& oracle,
                     std::span<SynthesisEngine* const> engines,
                     const GuaranteeParams& params);

struct ReplayTotal
{
  std::size_t total_samples = 0;
  bool found = false;
};

/// Replays `recorded` under each stopping function. Throws
/// std::invalid_argument on an empty family and OracleExhausted when the
/// sequence is too short.
std::vector<ReplayTotal> replay_with_g(std::span<const Example> recorded,
                                       SynthesisEngine& engine,
                                       const GuaranteeParams& params,
                                       std::span<const StoppingFunction> family);

}  // namespace synguar
