#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"

namespace fs = std::filesystem;

namespace {

const std::string kTasks = SYNGUAR_TASKS_DIR;

struct Outcome
{
  int code;
  std::string out;
};

Outcome run(const std::string& args)
{
  std::string cmd = std::string(SYNGUAR_CLI) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  char buf[4096];
  while (std::size_t n = std::fread(buf, 1, sizeof buf, pipe)) out.append(buf, n);
  int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string slurp(const fs::path& p)
{
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch(const std::string& name)
{
  fs::path dir = fs::temp_directory_path() / ("synguar_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

void write(const fs::path& p, const std::string& text)
{
  std::ofstream(p, std::ios::binary) << text;
}

std::string command_task(const std::string& mode)
{
  nlohmann::json j = {
      {"name", "external_" + mode},
      {"inputs", {{{"name", "x"}, {"sort", "string"}}}},
      {"components", {"concat"}},
      {"target", {{"kind", "command"}, {"value", std::string(SYNGUAR_ECHO) + " " + mode}}},
      {"distribution", {{"kind", "uniform_string"}, {"params", {{"min_len", 1}, {"max_len", 4}}}}},
      {"limits", {{"max_size", 3}, {"max_nesting", 0}}},
      {"guarantee", {{"epsilon", 0.2}, {"delta", 0.1}, {"k", 5}}}};
  return j.dump(2);
}

}  // namespace

TEST_CASE("run writes a report and trace and exits 0")
{
  fs::path dir = scratch("run");
  Outcome o = run("run " + kTasks + "/finite/swap.json --seed 1 --out " + dir.string());
  CHECK(o.code == 0);
  CHECK(o.out == "(if (= x \"a\") \"b\" \"a\")\n");
  auto report = nlohmann::json::parse(slurp(dir / "swap.report.json"));
  CHECK(report["format_version"] == 1);
  CHECK(report["tier"] == 1);
  CHECK(slurp(dir / "swap.trace.csv").rfind("iteration,samples_seen", 0) == 0);
}

TEST_CASE("identical seeds give byte-identical files")
{
  fs::path a = scratch("det_a");
  fs::path b = scratch("det_b");
  std::string task = kTasks + "/desk/contains_pipe.json --seed 5 --heldout 2000 --out ";
  REQUIRE(run("run " + task + a.string()).code == 0);
  REQUIRE(run("run " + task + b.string()).code == 0);
  CHECK(slurp(a / "contains_pipe.report.json") == slurp(b / "contains_pipe.report.json"));
  CHECK(slurp(a / "contains_pipe.trace.csv") == slurp(b / "contains_pipe.trace.csv"));
}

TEST_CASE("exit codes")
{
  fs::path dir = scratch("codes");

  SUBCASE("contradictory examples give None")
  {
    write(dir / "ex.json", R"([{"inputs": {"x": "a"}, "output": "a"},
                               {"inputs": {"x": "a"}, "output": "b"}])");
    write(dir / "task.json", command_task("echo"));
    Outcome o = run("run " + (dir / "task.json").string() + " --examples "
                    + (dir / "ex.json").string() + " --step-k 2");
    CHECK(o.code == 2);
    CHECK(o.out == "None\n");
  }
  SUBCASE("input errors")
  {
    write(dir / "bad.json", "{ not json");
    CHECK(run("run " + (dir / "bad.json").string()).code == 3);
    CHECK(run("run /nonexistent.json").code == 3);
    CHECK(run("run").code == 3);
    CHECK(run("frobnicate").code == 3);
    CHECK(run("run " + kTasks + "/finite/swap.json --epsilon 2").code == 3);
    CHECK(run("eval " + (dir / "missing").string()).code == 3);
    write(dir / "ex.json", R"([{"inputs": {"x": "a"}, "output": "a"}])");
    CHECK(run("run " + kTasks + "/finite/swap.json --examples " + (dir / "ex.json").string())
              .code
          == 3);
  }
  SUBCASE("resource cap")
  {
    CHECK(run("run " + kTasks + "/desk/replace_pipe.json --max-entries 10").code == 4);
  }
  SUBCASE("external target failures")
  {
    write(dir / "crash.json", command_task("crash"));
    CHECK(run("run " + (dir / "crash.json").string()).code == 5);
    write(dir / "malformed.json", command_task("malformed"));
    CHECK(run("run " + (dir / "malformed.json").string()).code == 5);
  }
}

TEST_CASE("external target end to end")
{
  fs::path dir = scratch("external");
  write(dir / "task.json", command_task("echo"));
  Outcome o = run("run " + (dir / "task.json").string() + " --heldout 100");
  CHECK(o.code == 0);
  CHECK(o.out == "x\n");
}

TEST_CASE("other subcommands")
{
  fs::path dir = scratch("other");
  std::string swap = kTasks + "/finite/swap.json";

  Outcome e = run("eval " + kTasks + "/finite --trials 1 --baseline-n 2 --out " + dir.string());
  CHECK(e.code == 0);
  CHECK(e.out.find("synguar: ") != std::string::npos);
  CHECK(e.out.find("baseline: ") != std::string::npos);
  CHECK(fs::exists(dir / "suite.json"));
  CHECK(fs::exists(dir / "suite.csv"));

  Outcome t = run("trace-shrinkage " + swap + " --n 3");
  CHECK(t.code == 0);
  CHECK(t.out.rfind("samples_seen,h0,h1,h2\n", 0) == 0);
  CHECK(std::count(t.out.begin(), t.out.end(), '\n') == 5);
  CHECK(run("trace-shrinkage " + swap + " --n 0").code == 3);

  Outcome v = run("verify-counts " + swap + " --n 3");
  CHECK(v.code == 0);
  CHECK(v.out.empty());

  Outcome s = run("sample " + swap + " --n 2 --seed 3");
  CHECK(s.code == 0);
  auto examples = nlohmann::json::parse(s.out);
  CHECK(examples.size() == 2);
  CHECK(examples[0].contains("inputs"));
  CHECK(run("sample " + swap + " --n 2 --seed 3").out == s.out);
}
