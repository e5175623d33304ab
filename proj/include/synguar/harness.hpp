#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "synguar/cluster_unify.hpp"
#include "synguar/guarantee.hpp"
#include "synguar/oracle.hpp"
#include "synguar/stun_engine.hpp"
#include "synguar/task.hpp"

namespace synguar {

inline constexpr int kFormatVersion = 1;

/// Command-line overrides of task defaults.
struct RunOptions
{
  std::optional<double> epsilon;
  std::optional<double> delta;
  std::optional<std::size_t> step_k;
  std::optional<std::size_t> max_size;
  std::optional<int> max_nesting;
  std::uint64_t seed = 1;
  /// Replay these instead of sampling.
  std::optional<std::vector<Example>> examples;
  /// Held-out evaluation samples; 0 disables the estimate.
  std::size_t heldout_samples = 10'000;
  GammaMode gamma = GammaMode::Refined;
  /// Enumerator cap on distinct value vectors.
  std::size_t max_entries = 3'000'000;
  bool timing = false;
};

/// Effective parameters after applying overrides.
struct Settings
{
  double epsilon;
  double delta;
  std::size_t step_k;
  std::size_t max_size;
  int max_nesting;
};

Settings resolve(const TaskSpec& task, const RunOptions& options);

/// One StunEngine per tier 0..max_nesting.
std::vector<std::unique_ptr<StunEngine>> make_engines(const TaskSpec& task,
                                                      std::size_t max_size, int max_nesting,
                                                      GammaMode gamma,
                                                      std::size_t max_entries = 3'000'000);

struct HeldOut
{
  double error = 0.0;
  std::size_t samples = 0;
  /// Computed over the whole finite domain.
  bool exact = false;
};

/// Error of `program` against the target on fresh inputs from a stream
/// labelled apart from synthesis draws, or exactly over a finite domain.
HeldOut evaluate_heldout(const TaskSpec& task, Target& target, const Expr& program,
                         std::uint64_t seed, std::size_t samples);

enum class RunMode
{
  SynGuar,
  Baseline,
};

struct RunReport
{
  std::string task;
  RunMode mode = RunMode::SynGuar;
  std::uint64_t seed = 0;
  Settings settings{};
  std::size_t baseline_n = 0;
  std::optional<Program> program;
  std::size_t total_samples = 0;
  std::size_t validation_samples = 0;
  std::vector<TraceRow> trace;
  /// Every example drawn, in order. Not serialized.
  std::vector<Example> examples;
  std::optional<HeldOut> heldout;
  std::optional<double> wall_seconds;
  /// Set when the run failed; the remaining fields are partial.
  std::optional<std::string> error;

  bool correct() const { return program && heldout && heldout->error == 0.0; }
};

/// Seed of the synthesis stream for a run seed.
std::uint64_t synthesis_seed(std::uint64_t seed);
/// Seed of the held-out stream for a run seed.
std::uint64_t heldout_seed(std::uint64_t seed);

/// Tiered SynGuar run. Throws InputError, ResourceCapError and OracleError.
RunReport run_task(const TaskSpec& task, const RunOptions& options);

/// Draws exactly `n` examples and returns the minimal consistent program of
/// the first nonempty tier; no guarantee.
RunReport run_baseline(const TaskSpec& task, const RunOptions& options, std::size_t n);

nlohmann::ordered_json report_json(const RunReport& report);

struct ModeSummary
{
  std::size_t trials = 0;
  std::size_t correct_trials = 0;
  std::size_t failed_trials = 0;
  /// Tasks correct in every trial.
  std::size_t fully_correct_tasks = 0;
  double mean_samples = 0.0;
  double mean_heldout_error = 0.0;
};

struct SuiteReport
{
  std::vector<std::string> tasks;
  std::size_t trials = 0;
  std::optional<std::size_t> baseline_n;
  std::vector<RunReport> rows;
  ModeSummary synguar;
  std::optional<ModeSummary> baseline;
};

/// Trial seed for (run seed, task, trial index).
std::uint64_t trial_seed(std::uint64_t seed, const std::string& task, std::size_t trial);

/// Runs every `*.json` task of `dir` in name order. Per-row failures are
/// recorded, not thrown. Throws InputError when `dir` is missing or a task
/// file is invalid.
SuiteReport run_suite(const std::filesystem::path& dir, std::size_t trials,
                      std::optional<std::size_t> baseline_n, const RunOptions& options);

/// Recomputes the mode summaries from rows.
void summarize(SuiteReport& suite);

nlohmann::ordered_json suite_json(const SuiteReport& suite);
/// One row per run: task,mode,trial_seed,program,tier,total_samples,heldout_error,correct,error.
std::string suite_csv(const SuiteReport& suite);

/// `samples_seen,h0[,h1[,h2]]` after each of n examples fed one at a time,
/// starting from zero examples.
std::string shrinkage_csv(const TaskSpec& task, std::span<const Example> examples,
                          std::size_t max_size, int max_nesting);

/// Example list from the synthesis stream of `seed`.
std::vector<Example> draw_examples(const TaskSpec& task, Target& target, std::size_t n,
                                   std::uint64_t seed);

/// Differences between the engine's counts and brute force on `examples`;
/// empty when they agree.
std::vector<std::string> verify_counts(const TaskSpec& task, std::span<const Example> examples,
                                       std::size_t max_size, int max_nesting,
                                       std::uint64_t cap = 10'000'000);

}  // namespace synguar
