// synguar: command-line front end.

#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "synguar/errors.hpp"
#include "synguar/harness.hpp"

namespace fs = std::filesystem;
using namespace synguar;

namespace {

enum Exit
{
  kFound = 0,
  kNone = 2,
  kInput = 3,
  kCap = 4,
  kOracle = 5,
};

struct Common
{
  std::optional<double> epsilon;
  std::optional<double> delta;
  std::optional<std::size_t> step_k;
  std::optional<std::size_t> max_size;
  std::optional<int> max_nesting;
  std::uint64_t seed = 1;
  std::string out;
  std::string examples;
  std::size_t heldout = 10'000;
  bool literal_gamma = false;
  bool timing = false;
  std::size_t max_entries = 3'000'000;
};

void add_limits(CLI::App* app, Common& c)
{
  app->add_option("--max-size", c.max_size, "Maximum component size per straight-line part");
  app->add_option("--max-nesting", c.max_nesting, "Maximum number of conditionals (0..2)");
  app->add_option("--seed", c.seed, "Random seed");
  app->add_option("--examples", c.examples, "Replay examples from a JSON file");
}

void add_guarantee(CLI::App* app, Common& c)
{
  app->add_option("--epsilon", c.epsilon, "Error tolerance");
  app->add_option("--delta", c.delta, "Failure probability");
  app->add_option("--step-k", c.step_k, "Examples per sampling iteration");
  app->add_option("--heldout", c.heldout, "Held-out evaluation samples (0 disables)");
  app->add_flag("--literal-gamma", c.literal_gamma, "Use the unrefined branch patterns");
  app->add_flag("--timing", c.timing, "Record wall time in reports");
  app->add_option("--max-entries", c.max_entries, "Enumerator cap on distinct value vectors");
}

RunOptions options_of(const Common& c, const TaskSpec* task)
{
  RunOptions o;
  o.epsilon = c.epsilon;
  o.delta = c.delta;
  o.step_k = c.step_k;
  o.max_size = c.max_size;
  o.max_nesting = c.max_nesting;
  o.seed = c.seed;
  o.heldout_samples = c.heldout;
  o.gamma = c.literal_gamma ? GammaMode::Literal : GammaMode::Refined;
  o.timing = c.timing;
  o.max_entries = c.max_entries;
  if (!c.examples.empty() && task)
  {
    o.examples = load_examples(c.examples, task->inputs, task->output_sort);
    check_examples(*task, *o.examples);
  }
  return o;
}

void write_file(const fs::path& path, const std::string& text)
{
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError(path.string() + ": cannot write");
  out << text;
}

std::vector<Example> examples_for(const TaskSpec& task, const Common& c, std::size_t n)
{
  if (!c.examples.empty())
  {
    auto ex = load_examples(c.examples, task.inputs, task.output_sort);
    check_examples(task, ex);
    if (ex.size() > n) ex.resize(n);
    return ex;
  }
  auto target = make_target(task);
  return draw_examples(task, *target, n, c.seed);
}

int cmd_run(const std::string& task_file, const Common& c, std::optional<std::size_t> baseline_n,
            const std::string& dump_dir)
{
  TaskSpec task = load_task(task_file);
  RunOptions opts = options_of(c, &task);
  RunReport report = baseline_n ? run_baseline(task, opts, *baseline_n) : run_task(task, opts);
  std::cout << (report.program ? pretty(report.program->expr) : "None") << '\n';
  if (!c.out.empty())
  {
    fs::path dir(c.out);
    write_file(dir / (task.name + ".report.json"), report_json(report).dump(2) + "\n");
    write_file(dir / (task.name + ".trace.csv"), trace_csv(report.trace));
  }
  if (!dump_dir.empty())
  {
    Settings s = resolve(task, opts);
    StunOptions so;
    so.max_size = s.max_size;
    so.tier = report.program ? report.program->tier : s.max_nesting;
    so.output_sort = task.output_sort;
    StunEngine engine(default_component_set(task.language()), so);
    engine.update_hypothesis(report.examples);
    fs::path dir(dump_dir);
    write_file(dir / (task.name + ".counts.csv"), engine.table().to_csv());
    write_file(dir / (task.name + ".clusters.csv"), engine.clusters().to_csv());
  }
  return report.program ? kFound : kNone;
}

int cmd_eval(const std::string& suite_dir, const Common& c, std::size_t trials,
             std::optional<std::size_t> baseline_n)
{
  SuiteReport suite = run_suite(suite_dir, trials, baseline_n, options_of(c, nullptr));
  auto line = [](const char* mode, const ModeSummary& m, std::size_t tasks) {
    std::cout << mode << ": " << m.correct_trials << "/" << m.trials
              << " trials correct, " << m.fully_correct_tasks << "/" << tasks
              << " tasks correct in every trial, mean samples " << m.mean_samples
              << ", mean held-out error " << m.mean_heldout_error << '\n';
  };
  line("synguar", suite.synguar, suite.tasks.size());
  if (suite.baseline) line("baseline", *suite.baseline, suite.tasks.size());
  if (!c.out.empty())
  {
    fs::path dir(c.out);
    write_file(dir / "suite.json", suite_json(suite).dump(2) + "\n");
    write_file(dir / "suite.csv", suite_csv(suite));
  }
  return kFound;
}

int cmd_trace(const std::string& task_file, const Common& c, std::size_t n)
{
  if (n == 0) throw InputError("--n must be at least 1");
  TaskSpec task = load_task(task_file);
  Settings s = resolve(task, options_of(c, nullptr));
  std::string csv = shrinkage_csv(task, examples_for(task, c, n), s.max_size, s.max_nesting);
  if (c.out.empty())
  {
    std::cout << csv;
  }
  else
  {
    write_file(fs::path(c.out) / (task.name + ".shrinkage.csv"), csv);
  }
  return kFound;
}

int cmd_verify(const std::string& task_file, const Common& c, std::size_t n)
{
  TaskSpec task = load_task(task_file);
  Settings s = resolve(task, options_of(c, nullptr));
  for (const auto& issue :
       verify_counts(task, examples_for(task, c, n), s.max_size, s.max_nesting))
  {
    std::cout << issue << '\n';
  }
  return kFound;
}

int cmd_sample(const std::string& task_file, const Common& c, std::size_t n)
{
  TaskSpec task = load_task(task_file);
  auto target = make_target(task);
  std::string text = examples_to_json(draw_examples(task, *target, n, c.seed)).dump(2) + "\n";
  if (c.out.empty())
  {
    std::cout << text;
  }
  else
  {
    write_file(c.out, text);
  }
  return kFound;
}

}  // namespace

int main(int argc, char** argv)
{
  CLI::App app{"Example-count-guaranteed synthesis of string programs"};
  app.require_subcommand(1);

  Common common;
  std::string task_file;
  std::string suite_dir;
  std::string dump_dir;
  std::optional<std::size_t> baseline_n;
  std::size_t trials = 3;
  std::size_t n = 10;

  auto* run = app.add_subcommand("run", "Synthesize a program for a task");
  run->add_option("task", task_file, "Task file")->required();
  add_limits(run, common);
  add_guarantee(run, common);
  run->add_option("--baseline-n", baseline_n, "Fixed-sample baseline with this many examples");
  run->add_option("--out", common.out, "Directory for the report and trace");
  run->add_option("--dump-counts", dump_dir, "Directory for count-table and cluster CSVs");

  auto* eval = app.add_subcommand("eval", "Evaluate every task of a suite directory");
  eval->add_option("suite", suite_dir, "Suite directory")->required();
  add_guarantee(eval, common);
  eval->add_option("--max-size", common.max_size, "Maximum component size");
  eval->add_option("--max-nesting", common.max_nesting, "Maximum number of conditionals");
  eval->add_option("--seed", common.seed, "Base seed");
  eval->add_option("--trials", trials, "Trials per task");
  eval->add_option("--baseline-n", baseline_n, "Also run the fixed-sample baseline");
  eval->add_option("--out", common.out, "Directory for suite.json and suite.csv");

  auto* trace = app.add_subcommand("trace-shrinkage", "Tier sizes as examples accumulate");
  trace->add_option("task", task_file, "Task file")->required();
  trace->add_option("--n", n, "Number of examples");
  add_limits(trace, common);
  trace->add_option("--out", common.out, "Output directory");

  auto* verify = app.add_subcommand("verify-counts", "Compare engine counts with brute force");
  verify->add_option("task", task_file, "Task file")->required();
  verify->add_option("--n", n, "Number of examples");
  add_limits(verify, common);

  auto* sample = app.add_subcommand("sample", "Dump examples drawn for a task");
  sample->add_option("task", task_file, "Task file")->required();
  sample->add_option("--n", n, "Number of examples");
  sample->add_option("--seed", common.seed, "Random seed");
  sample->add_option("--out", common.out, "Output file");

  try
  {
    app.parse(argc, argv);
  }
  catch (const CLI::ParseError& e)
  {
    int code = app.exit(e);
    return code == 0 ? 0 : kInput;
  }

  try
  {
    if (*run) return cmd_run(task_file, common, baseline_n, dump_dir);
    if (*eval) return cmd_eval(suite_dir, common, trials, baseline_n);
    if (*trace) return cmd_trace(task_file, common, n);
    if (*verify) return cmd_verify(task_file, common, n);
    if (*sample) return cmd_sample(task_file, common, n);
  }
  catch (const InputError& e)
  {
    std::cerr << "error: " << e.what() << '\n';
    return kInput;
  }
  catch (const ResourceCapError& e)
  {
    std::cerr << "resource cap: " << e.what() << '\n';
    return kCap;
  }
  catch (const OracleError& e)
  {
    std::cerr << "oracle failure: " << e.what() << '\n';
    if (!e.input().empty()) std::cerr << "input: " << e.input() << '\n';
    return kOracle;
  }
  catch (const std::invalid_argument& e)
  {
    std::cerr << "error: " << e.what() << '\n';
    return kInput;
  }
  return kInput;
}
