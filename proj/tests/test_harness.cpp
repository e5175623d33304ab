#include <sstream>

#include "doctest.h"
#include "synguar/brute_oracle.hpp"
#include "synguar/errors.hpp"
#include "synguar/harness.hpp"

using namespace synguar;

namespace {

const std::string kTasks = SYNGUAR_TASKS_DIR;

TaskSpec swap_task()
{
  return load_task(kTasks + "/finite/swap.json");
}

TaskSpec constant_task()
{
  return parse_task(nlohmann::json::parse(R"({
    "name": "constant",
    "inputs": [{"name": "x", "sort": "string"}],
    "string_constants": ["ok"],
    "components": ["concat"],
    "target": {"kind": "dsl", "value": "\"ok\""},
    "distribution": {"kind": "uniform_string", "params": {"min_len": 1, "max_len": 3}},
    "limits": {"max_size": 3, "max_nesting": 1},
    "guarantee": {"epsilon": 0.1, "delta": 0.05, "k": 5}
  })"));
}

std::vector<std::vector<std::string>> csv_rows(const std::string& csv)
{
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(csv);
  std::string line;
  while (std::getline(in, line))
  {
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

BigNat big(const std::string& s)
{
  return BigNat(s);
}

}  // namespace

TEST_CASE("overrides are validated")
{
  TaskSpec task = swap_task();
  RunOptions o;
  Settings s = resolve(task, o);
  CHECK(s.epsilon == doctest::Approx(0.2));
  CHECK(s.step_k == 4);
  o.epsilon = 0.3;
  o.max_nesting = 1;
  s = resolve(task, o);
  CHECK(s.epsilon == doctest::Approx(0.3));
  CHECK(s.max_nesting == 1);
  o.delta = 1.0;
  CHECK_THROWS_AS(resolve(task, o), InputError);
  o.delta.reset();
  o.max_nesting = 3;
  CHECK_THROWS_AS(resolve(task, o), InputError);
}

TEST_CASE("swap task returns a tier-one conditional")
{
  RunOptions o;
  o.seed = 1;
  RunReport r = run_task(swap_task(), o);
  REQUIRE(r.program.has_value());
  std::string text = pretty(r.program->expr);
  CHECK((text == "(if (= x \"a\") \"b\" \"a\")" || text == "(if (= x \"b\") \"a\" \"b\")"));
  CHECK(r.program->tier == 1);
  REQUIRE(r.heldout.has_value());
  CHECK(r.heldout->exact);
  CHECK(r.heldout->samples == 2);
  CHECK(r.correct());
}

TEST_CASE("constant target: sampling plus validation accounting")
{
  TaskSpec task = constant_task();
  RunOptions o;
  o.seed = 4;
  o.heldout_samples = 200;
  RunReport r = run_task(task, o);
  REQUIRE(r.program.has_value());
  CHECK(r.program->tier == 0);
  CHECK(pretty(r.program->expr) == "\"ok\"");
  std::size_t iterations = 0;
  TraceRow last_sampling;
  for (const auto& row : r.trace)
  {
    if (row.phase == Phase::Sampling && row.samples_seen > 0)
    {
      ++iterations;
      last_sampling = row;
    }
  }
  CHECK(r.validation_samples
        == sample_complexity(last_sampling.size_upper, 0.1, 0.05 / 2));
  CHECK(r.total_samples == task.step_k * iterations + r.validation_samples);
  CHECK(r.heldout->samples == 200);
  CHECK(r.correct());
}

TEST_CASE("replayed contradictory examples give None")
{
  TaskSpec task = swap_task();
  Env a({{"x", std::string("a")}});
  RunOptions o;
  o.examples = std::vector<Example>{{a, std::string("a")}, {a, std::string("b")}};
  o.step_k = 2;
  RunReport r = run_task(task, o);
  CHECK_FALSE(r.program.has_value());
  CHECK_FALSE(r.heldout.has_value());
  CHECK(report_json(r)["program"].is_null());
}

TEST_CASE("baseline draws exactly n examples")
{
  TaskSpec task = load_task(kTasks + "/desk/contains_pipe.json");
  RunOptions o;
  o.seed = 3;
  o.heldout_samples = 500;
  RunReport r = run_baseline(task, o, 4);
  CHECK(r.total_samples == 4);
  CHECK(r.examples.size() == 4);
  CHECK(r.mode == RunMode::Baseline);
  CHECK(report_json(r)["baseline_n"] == 4);
  REQUIRE(r.program.has_value());
  for (const auto& ex : r.examples) CHECK(eval(r.program->expr, ex.inputs) == ex.output);
}

TEST_CASE("held-out evaluation")
{
  CHECK(heldout_seed(7) != synthesis_seed(7));
  TaskSpec task = load_task(kTasks + "/desk/append_comma.json");
  DslTarget target(*task.target.program);
  Expr wrong = parse_expr("(concat x \";\")", task.inputs);
  HeldOut h = evaluate_heldout(task, target, wrong, 1, 300);
  CHECK(h.error == doctest::Approx(1.0));
  CHECK_FALSE(h.exact);
  HeldOut right = evaluate_heldout(task, target, *task.target.program, 1, 300);
  CHECK(right.error == 0.0);

  TaskSpec swap = swap_task();
  DslTarget swap_target(*swap.target.program);
  HeldOut half = evaluate_heldout(swap, swap_target, parse_expr("\"a\"", swap.inputs), 1, 0);
  CHECK(half.exact);
  CHECK(half.error == doctest::Approx(0.5));
}

TEST_CASE("reports are reproducible")
{
  TaskSpec task = load_task(kTasks + "/desk/replace_pipe.json");
  RunOptions o;
  o.seed = 11;
  o.heldout_samples = 1000;
  RunReport a = run_task(task, o);
  RunReport b = run_task(task, o);
  CHECK(report_json(a).dump(2) == report_json(b).dump(2));
  CHECK(trace_csv(a.trace) == trace_csv(b.trace));
  CHECK(report_json(a)["format_version"] == kFormatVersion);
  CHECK_FALSE(report_json(a).contains("wall_seconds"));
  o.timing = true;
  CHECK(report_json(run_task(task, o)).contains("wall_seconds"));
}

TEST_CASE("suites")
{
  CHECK_THROWS_AS(run_suite(kTasks + "/missing", 1, std::nullopt, {}), InputError);

  SuiteReport empty = run_suite(kTasks + "/finite", 0, 4, {});
  CHECK(empty.rows.empty());
  CHECK(empty.synguar.trials == 0);
  CHECK(empty.tasks.size() >= 3);

  RunOptions o;
  o.seed = 2;
  SuiteReport s = run_suite(kTasks + "/finite", 2, 2, o);
  CHECK(s.rows.size() == s.tasks.size() * 2 * 2);
  CHECK(s.synguar.trials == s.tasks.size() * 2);
  REQUIRE(s.baseline.has_value());
  CHECK(s.baseline->trials == s.tasks.size() * 2);

  ModeSummary before = s.synguar;
  summarize(s);
  CHECK(s.synguar.correct_trials == before.correct_trials);
  CHECK(s.synguar.mean_samples == before.mean_samples);

  std::string csv = suite_csv(s);
  CHECK(csv.rfind("task,mode,trial_seed,program,tier,total_samples,heldout_error,correct,error\n",
                  0)
        == 0);
  CHECK(suite_json(s)["rows"].size() == s.rows.size());
  CHECK(trial_seed(2, "swap", 0) != trial_seed(2, "swap", 1));
}

TEST_CASE("shrinkage traces")
{
  SUBCASE("swap: H0 empties once both branches are witnessed")
  {
    TaskSpec task = swap_task();
    DslTarget target(*task.target.program);
    auto examples = draw_examples(task, target, 12, 1);
    auto rows = csv_rows(shrinkage_csv(task, examples, task.max_size, task.max_nesting));
    REQUIRE(rows.size() == 14);
    CHECK(rows[0] == std::vector<std::string>{"samples_seen", "h0", "h1", "h2"});

    BruteConfig config;
    config.components = default_component_set(task.language());
    config.max_size = task.max_size;
    config.max_nesting = task.max_nesting;
    BruteEstimate est = estimate_programs(config);
    CHECK(big(rows[1][1]) == est.by_conditions[0]);
    CHECK(big(rows[1][2]) == est.by_conditions[0] + est.by_conditions[1]);

    bool seen_a = false, seen_b = false;
    for (std::size_t i = 0; i < examples.size(); ++i)
    {
      const auto& x = std::get<std::string>(examples[i].inputs.value(0));
      seen_a = seen_a || x == "a";
      seen_b = seen_b || x == "b";
      if (seen_a && seen_b) CHECK(big(rows[i + 2][1]) == 0);
    }
    CHECK((seen_a && seen_b));
    for (std::size_t r = 2; r < rows.size(); ++r)
    {
      for (std::size_t c = 1; c < rows[r].size(); ++c)
      {
        CHECK(big(rows[r][c]) <= big(rows[r - 1][c]));
      }
    }
  }
  SUBCASE("constant target keeps a positive H0")
  {
    TaskSpec task = constant_task();
    DslTarget target(*task.target.program);
    auto examples = draw_examples(task, target, 20, 1);
    auto rows = csv_rows(shrinkage_csv(task, examples, task.max_size, 0));
    CHECK(rows.back()[1] == rows[rows.size() - 2][1]);
    CHECK(big(rows.back()[1]) > 0);
  }
}

TEST_CASE("engine counts agree with brute force on task instances")
{
  for (const char* name : {"/finite/swap.json", "/finite/double_or_keep.json"})
  {
    TaskSpec task = load_task(kTasks + name);
    DslTarget target(*task.target.program);
    auto examples = draw_examples(task, target, 3, 5);
    auto issues = verify_counts(task, examples, task.max_size, task.max_nesting);
    for (const auto& i : issues) FAIL_CHECK(i);
  }
}

TEST_CASE("engines report sizes per tier")
{
  TaskSpec task = swap_task();
  auto engines = make_engines(task, 3, 2, GammaMode::Refined);
  REQUIRE(engines.size() == 3);
  Env a({{"x", std::string("a")}});
  Env b({{"x", std::string("b")}});
  std::vector<Example> ex{{a, std::string("b")}, {b, std::string("a")}};
  engines[2]->update_hypothesis(ex);
  CHECK(engines[2]->size_at(0).empty());
  CHECK(engines[2]->size_at(1) == HypothesisSize(4));
  CHECK_THROWS_AS(engines[0]->size_at(1), std::invalid_argument);
  engines[0]->update_hypothesis(ex);
  CHECK_FALSE(engines[0]->pick_program().has_value());
}
