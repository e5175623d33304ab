#include "synguar/harness.hpp"

#include <algorithm>
#include <chrono>
#include <map>
#include <sstream>

#include "synguar/brute_oracle.hpp"
#include "synguar/errors.hpp"

namespace synguar {

using nlohmann::ordered_json;

Settings resolve(const TaskSpec& task, const RunOptions& options)
{
  Settings s{options.epsilon.value_or(task.epsilon), options.delta.value_or(task.delta),
             options.step_k.value_or(task.step_k), options.max_size.value_or(task.max_size),
             options.max_nesting.value_or(task.max_nesting)};
  if (!(s.epsilon > 0 && s.epsilon < 1)) throw InputError("epsilon must lie in (0,1)");
  if (!(s.delta > 0 && s.delta < 1)) throw InputError("delta must lie in (0,1)");
  if (s.step_k == 0) throw InputError("step k must be positive");
  if (s.max_size == 0 || s.max_size > 255) throw InputError("max size must lie in 1..255");
  if (s.max_nesting < 0 || s.max_nesting > 2) throw InputError("max nesting must lie in 0..2");
  return s;
}

std::vector<std::unique_ptr<StunEngine>> make_engines(const TaskSpec& task,
                                                      std::size_t max_size, int max_nesting,
                                                      GammaMode gamma,
                                                      std::size_t max_entries)
{
  std::vector<Component> components = default_component_set(task.language());
  std::vector<std::unique_ptr<StunEngine>> engines;
  for (int tier = 0; tier <= max_nesting; ++tier)
  {
    StunOptions opts;
    opts.max_size = max_size;
    opts.tier = tier;
    opts.gamma = gamma;
    opts.max_entries = max_entries;
    opts.output_sort = task.output_sort;
    engines.push_back(std::make_unique<StunEngine>(components, opts));
  }
  return engines;
}

std::uint64_t synthesis_seed(std::uint64_t seed)
{
  return derive_seed(seed, "synthesis");
}

std::uint64_t heldout_seed(std::uint64_t seed)
{
  return derive_seed(seed, "heldout");
}

std::uint64_t trial_seed(std::uint64_t seed, const std::string& task, std::size_t trial)
{
  return derive_seed(seed, task + "/" + std::to_string(trial));
}

HeldOut evaluate_heldout(const TaskSpec& task, Target& target, const Expr& program,
                         std::uint64_t seed, std::size_t samples)
{
  HeldOut h;
  std::size_t wrong = 0;
  if (task.finite_domain())
  {
    const auto& domain = task.distribution.enumerated.domain;
    for (const auto& env : domain)
    {
      if (eval(program, env) != make_example(target, env).output) ++wrong;
    }
    h.samples = domain.size();
    h.exact = true;
  }
  else
  {
    Rng rng(heldout_seed(seed));
    for (std::size_t i = 0; i < samples; ++i)
    {
      Env env = sample_input(task.distribution, task.inputs, rng);
      if (eval(program, env) != make_example(target, env).output) ++wrong;
    }
    h.samples = samples;
  }
  h.error = h.samples == 0 ? 0.0 : static_cast<double>(wrong) / static_cast<double>(h.samples);
  return h;
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start)
{
  return std::chrono::duration<double>(Clock::now() - start).count();
}

GuaranteeParams params_of(const Settings& s)
{
  return GuaranteeParams(s.epsilon, s.delta, s.step_k);
}

std::unique_ptr<ExampleSource> source_for(const TaskSpec& task, const RunOptions& options,
                                          Target& target)
{
  if (options.examples) return std::make_unique<ReplaySource>(*options.examples);
  return std::make_unique<SampledSource>(task, target, synthesis_seed(options.seed));
}

void add_heldout(RunReport& report, const TaskSpec& task, const RunOptions& options,
                 Target& target)
{
  if (!report.program) return;
  if (options.heldout_samples == 0 && !task.finite_domain()) return;
  report.heldout = evaluate_heldout(task, target, report.program->expr, options.seed,
                                    options.heldout_samples);
}

std::string mode_name(RunMode mode)
{
  return mode == RunMode::SynGuar ? "synguar" : "baseline";
}

std::string vector_text(std::span<const Value> values)
{
  std::string s = "[";
  for (std::size_t i = 0; i < values.size(); ++i)
  {
    if (i > 0) s += " ";
    s += value_text(values[i]);
  }
  return s + "]";
}

std::string csv_field(const std::string& s)
{
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s)
  {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

RunReport run_task(const TaskSpec& task, const RunOptions& options)
{
  auto start = Clock::now();
  RunReport report;
  report.task = task.name;
  report.seed = options.seed;
  report.settings = resolve(task, options);
  GuaranteeParams params = params_of(report.settings);

  auto engines = make_engines(task, report.settings.max_size, report.settings.max_nesting,
                              options.gamma, options.max_entries);
  std::vector<SynthesisEngine*> tiers;
  for (auto& e : engines) tiers.push_back(e.get());
  auto target = make_target(task);
  auto source = source_for(task, options, *target);

  RunResult r = run_tiered(*source, tiers, params);
  report.program = r.outcome.result;
  report.total_samples = r.outcome.total_samples;
  report.validation_samples = r.outcome.validation_samples;
  report.trace = std::move(r.state.trace);
  report.examples = std::move(r.state.examples);
  add_heldout(report, task, options, *target);
  if (options.timing) report.wall_seconds = seconds_since(start);
  return report;
}

RunReport run_baseline(const TaskSpec& task, const RunOptions& options, std::size_t n)
{
  auto start = Clock::now();
  RunReport report;
  report.task = task.name;
  report.mode = RunMode::Baseline;
  report.seed = options.seed;
  report.settings = resolve(task, options);
  report.baseline_n = n;

  auto engines = make_engines(task, report.settings.max_size, report.settings.max_nesting,
                              options.gamma, options.max_entries);
  auto target = make_target(task);
  auto source = source_for(task, options, *target);
  std::vector<Example> examples;
  for (std::size_t i = 0; i < n; ++i) examples.push_back(source->draw());
  for (auto& engine : engines)
  {
    engine->update_hypothesis(examples);
    if (engine->compute_size().empty()) continue;
    report.program = engine->pick_program();
    break;
  }
  report.total_samples = n;
  report.examples = std::move(examples);
  add_heldout(report, task, options, *target);
  if (options.timing) report.wall_seconds = seconds_since(start);
  return report;
}

ordered_json report_json(const RunReport& report)
{
  ordered_json j;
  j["format_version"] = kFormatVersion;
  j["task"] = report.task;
  j["mode"] = mode_name(report.mode);
  j["seed"] = report.seed;
  j["epsilon"] = report.settings.epsilon;
  j["delta"] = report.settings.delta;
  j["step_k"] = report.settings.step_k;
  j["max_size"] = report.settings.max_size;
  j["max_nesting"] = report.settings.max_nesting;
  if (report.mode == RunMode::Baseline) j["baseline_n"] = report.baseline_n;
  if (report.program)
  {
    j["program"] = pretty(report.program->expr);
    j["tier"] = report.program->tier;
    j["component_size"] = report.program->size;
  }
  else
  {
    j["program"] = nullptr;
  }
  j["total_samples"] = report.total_samples;
  j["validation_samples"] = report.validation_samples;
  if (report.heldout)
  {
    j["heldout"] = {{"error", report.heldout->error},
                    {"samples", report.heldout->samples},
                    {"exact", report.heldout->exact}};
  }
  else
  {
    j["heldout"] = nullptr;
  }
  ordered_json trace = ordered_json::array();
  for (const auto& row : report.trace)
  {
    trace.push_back({{"iteration", row.iteration},
                     {"samples_seen", row.samples_seen},
                     {"tier", row.tier},
                     {"size_upper", row.size_upper.to_string()},
                     {"threshold", row.threshold},
                     {"phase", std::string(phase_name(row.phase))}});
  }
  j["trace"] = std::move(trace);
  if (report.wall_seconds) j["wall_seconds"] = *report.wall_seconds;
  if (report.error) j["error"] = *report.error;
  return j;
}

void summarize(SuiteReport& suite)
{
  auto summary_for = [&suite](RunMode mode) {
    ModeSummary m;
    std::map<std::string, bool> all_correct;
    double samples = 0;
    std::size_t sampled_rows = 0;
    double error = 0;
    std::size_t evaluated_rows = 0;
    for (const auto& row : suite.rows)
    {
      if (row.mode != mode) continue;
      ++m.trials;
      auto [it, _] = all_correct.try_emplace(row.task, true);
      it->second = it->second && row.correct();
      if (row.correct()) ++m.correct_trials;
      if (row.error)
      {
        ++m.failed_trials;
        continue;
      }
      samples += static_cast<double>(row.total_samples);
      ++sampled_rows;
      if (row.heldout)
      {
        error += row.heldout->error;
        ++evaluated_rows;
      }
    }
    for (const auto& [task, ok] : all_correct) m.fully_correct_tasks += ok ? 1 : 0;
    m.mean_samples = sampled_rows ? samples / static_cast<double>(sampled_rows) : 0.0;
    m.mean_heldout_error = evaluated_rows ? error / static_cast<double>(evaluated_rows) : 0.0;
    return m;
  };
  suite.synguar = summary_for(RunMode::SynGuar);
  if (suite.baseline_n) suite.baseline = summary_for(RunMode::Baseline);
}

SuiteReport run_suite(const std::filesystem::path& dir, std::size_t trials,
                      std::optional<std::size_t> baseline_n, const RunOptions& options)
{
  if (!std::filesystem::is_directory(dir))
  {
    throw InputError(dir.string() + ": suite directory not found");
  }
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir))
  {
    if (entry.is_regular_file() && entry.path().extension() == ".json")
    {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  std::vector<TaskSpec> tasks;
  for (const auto& f : files) tasks.push_back(load_task(f));

  SuiteReport suite;
  suite.trials = trials;
  suite.baseline_n = baseline_n;
  for (const auto& task : tasks) suite.tasks.push_back(task.name);

  auto attempt = [&](const TaskSpec& task, RunOptions opts, RunMode mode) {
    try
    {
      return mode == RunMode::SynGuar ? run_task(task, opts)
                                      : run_baseline(task, opts, *baseline_n);
    }
    catch (const std::exception& e)
    {
      RunReport failed;
      failed.task = task.name;
      failed.mode = mode;
      failed.seed = opts.seed;
      failed.baseline_n = baseline_n.value_or(0);
      failed.error = e.what();
      return failed;
    }
  };

  for (const auto& task : tasks)
  {
    for (std::size_t t = 0; t < trials; ++t)
    {
      RunOptions opts = options;
      opts.seed = trial_seed(options.seed, task.name, t);
      suite.rows.push_back(attempt(task, opts, RunMode::SynGuar));
      if (baseline_n) suite.rows.push_back(attempt(task, opts, RunMode::Baseline));
    }
  }
  summarize(suite);
  return suite;
}

ordered_json suite_json(const SuiteReport& suite)
{
  auto summary = [](const ModeSummary& m) {
    return ordered_json{{"trials", m.trials},
                        {"correct_trials", m.correct_trials},
                        {"failed_trials", m.failed_trials},
                        {"fully_correct_tasks", m.fully_correct_tasks},
                        {"mean_samples", m.mean_samples},
                        {"mean_heldout_error", m.mean_heldout_error}};
  };
  ordered_json j;
  j["format_version"] = kFormatVersion;
  j["tasks"] = suite.tasks;
  j["trials"] = suite.trials;
  j["baseline_n"] = suite.baseline_n ? ordered_json(*suite.baseline_n) : ordered_json(nullptr);
  j["synguar"] = summary(suite.synguar);
  j["baseline"] = suite.baseline ? summary(*suite.baseline) : ordered_json(nullptr);
  ordered_json rows = ordered_json::array();
  for (const auto& row : suite.rows) rows.push_back(report_json(row));
  j["rows"] = std::move(rows);
  return j;
}

std::string suite_csv(const SuiteReport& suite)
{
  std::ostringstream out;
  out << "task,mode,trial_seed,program,tier,total_samples,heldout_error,correct,error\n";
  for (const auto& row : suite.rows)
  {
    out << csv_field(row.task) << ',' << mode_name(row.mode) << ',' << row.seed << ','
        << (row.program ? csv_field(pretty(row.program->expr)) : "") << ','
        << (row.program ? std::to_string(row.program->tier) : "") << ','
        << row.total_samples << ',';
    if (row.heldout) out << row.heldout->error;
    out << ',' << (row.correct() ? "true" : "false") << ','
        << (row.error ? csv_field(*row.error) : "") << '\n';
  }
  return out.str();
}

std::vector<Example> draw_examples(const TaskSpec& task, Target& target, std::size_t n,
                                   std::uint64_t seed)
{
  SampledSource source(task, target, synthesis_seed(seed));
  std::vector<Example> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(source.draw());
  return out;
}

std::string shrinkage_csv(const TaskSpec& task, std::span<const Example> examples,
                          std::size_t max_size, int max_nesting)
{
  StunOptions opts;
  opts.max_size = max_size;
  opts.tier = max_nesting;
  opts.output_sort = task.output_sort;
  StunEngine engine(default_component_set(task.language()), opts);
  std::ostringstream out;
  out << "samples_seen";
  for (int t = 0; t <= max_nesting; ++t) out << ",h" << t;
  out << '\n';
  for (std::size_t n = 0; n <= examples.size(); ++n)
  {
    engine.update_hypothesis(examples.first(n));
    out << n;
    for (int t = 0; t <= max_nesting; ++t) out << ',' << engine.size_at(t).to_string();
    out << '\n';
  }
  return out.str();
}

std::vector<std::string> verify_counts(const TaskSpec& task, std::span<const Example> examples,
                                       std::size_t max_size, int max_nesting,
                                       std::uint64_t cap)
{
  std::vector<Component> components = default_component_set(task.language());
  std::vector<Env> inputs;
  std::vector<Value> outputs;
  for (const auto& e : examples)
  {
    inputs.push_back(e.inputs);
    outputs.push_back(e.output);
  }

  BruteConfig config;
  config.components = components;
  config.max_size = max_size;
  config.max_nesting = max_nesting;
  config.result_sort = task.output_sort;
  config.inputs = inputs;
  config.cap = cap;
  BruteCounts brute = exact_counts(config, outputs);

  EnumerationOptions eopts;
  eopts.max_size = max_size;
  CountTable table = enumerate(components, inputs, eopts);

  std::vector<std::string> issues;
  auto report = [&issues](const std::string& what, const BigNat& engine, const BigNat& truth) {
    if (engine != truth)
    {
      issues.push_back(what + " engine=" + engine.str() + " brute=" + truth.str());
    }
  };

  std::map<BruteCounts::VectorKey, BigNat> engine_counts;
  for (EntryId id = 0; id < table.entry_count(); ++id)
  {
    std::vector<Value> values = table.values(id);
    for (const auto& cell : table.cells(id))
    {
      engine_counts[{table.sort(id), values, cell.size}] = cell.count;
    }
  }
  for (const auto& [key, truth] : brute.per_vector)
  {
    auto it = engine_counts.find(key);
    const auto& [sort, values, size] = key;
    report("count sort=" + std::string(sort_name(sort)) + " size=" + std::to_string(size)
               + " vector=" + vector_text(values),
           it == engine_counts.end() ? BigNat(0) : it->second, truth);
  }
  for (const auto& [key, count] : engine_counts)
  {
    if (brute.per_vector.count(key)) continue;
    const auto& [sort, values, size] = key;
    report("count sort=" + std::string(sort_name(sort)) + " size=" + std::to_string(size)
               + " vector=" + vector_text(values),
           count, BigNat(0));
  }

  ClusterMaps maps = cluster(table, task.output_sort, outputs);
  BoolClusters bools = bool_clusters(table);
  std::map<std::string, BigNat> engine_clusters;
  for (const auto& c : maps.clusters()) engine_clusters[c.vector.to_string()] = c.count;
  for (const auto& [bits, truth] : brute.by_consistency[0])
  {
    auto it = engine_clusters.find(bits);
    report("cluster " + bits, it == engine_clusters.end() ? BigNat(0) : it->second, truth);
  }
  for (const auto& [bits, count] : engine_clusters)
  {
    if (!brute.by_consistency[0].count(bits)) report("cluster " + bits, count, BigNat(0));
  }

  Unifier unifier(maps, bools);
  for (int t = 0; t <= max_nesting; ++t)
  {
    report("tier_size " + std::to_string(t), unifier.tier_size(t).count(),
           brute.tier_consistent[static_cast<std::size_t>(t)]);
  }
  return issues;
}

}  // namespace synguar
