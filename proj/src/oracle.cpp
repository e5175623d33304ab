#include "synguar/oracle.hpp"

#include "synguar/errors.hpp"
#include "synguar/external_target.hpp"

namespace synguar {

namespace {

constexpr std::int64_t kIntMax = 999;

std::size_t uniform_index(Rng& rng, std::size_t lo, std::size_t hi)
{
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

bool coin(Rng& rng, double p)
{
  return std::bernoulli_distribution(p)(rng);
}

std::string uniform_string(const UniformStringConfig& u, Rng& rng)
{
  std::size_t len = uniform_index(rng, u.min_len, u.max_len);
  double total = u.whitespace_weight + static_cast<double>(u.charset.size());
  std::uniform_real_distribution<double> pick(0.0, total);
  std::string s;
  s.reserve(len);
  for (std::size_t i = 0; i < len; ++i)
  {
    double r = pick(rng);
    if (r < u.whitespace_weight)
    {
      s.push_back(' ');
      continue;
    }
    auto k = static_cast<std::size_t>(r - u.whitespace_weight);
    s.push_back(u.charset[std::min(k, u.charset.size() - 1)]);
  }
  return s;
}

void mutate_once(std::string& s, const MutationConfig& m, Rng& rng)
{
  bool insert = coin(rng, m.insert_probability);
  if (!insert && s.empty()) insert = true;
  if (insert)
  {
    std::string_view alphabet = insert_alphabet();
    std::size_t len = uniform_index(rng, 1, m.max_insert_len);
    std::size_t pos = uniform_index(rng, 0, s.size());
    std::string piece;
    for (std::size_t i = 0; i < len; ++i)
    {
      piece.push_back(alphabet[uniform_index(rng, 0, alphabet.size() - 1)]);
    }
    s.insert(pos, piece);
  }
  else
  {
    s.erase(uniform_index(rng, 0, s.size() - 1), 1);
  }
}

std::string mutated_seed(const MutationConfig& m, Rng& rng)
{
  std::string s = m.seeds[uniform_index(rng, 0, m.seeds.size() - 1)];
  for (std::size_t i = 0; i < m.mutations; ++i) mutate_once(s, m, rng);
  return s;
}

// Uniform over pairs 0 <= a <= b <= |s|.
std::string uniform_substring(const std::string& s, Rng& rng)
{
  std::size_t n = s.size() + 1;
  std::size_t k = uniform_index(rng, 0, n * (n + 1) / 2 - 1);
  std::size_t a = 0;
  while (k >= n - a)
  {
    k -= n - a;
    ++a;
  }
  return s.substr(a, k);
}

std::int64_t bounded_int(const std::string* bound, Rng& rng)
{
  if (bound && coin(rng, 0.5))
  {
    return static_cast<std::int64_t>(uniform_index(rng, 0, bound->size()));
  }
  return std::uniform_int_distribution<std::int64_t>(1, kIntMax)(rng);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::string_view label)
{
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : label)
  {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  // splitmix64 finalizer over the combination
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (h | 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::string_view insert_alphabet()
{
  static const std::string alphabet = [] {
    std::string a;
    for (char c = 33; c <= 126; ++c) a.push_back(c);
    return a;
  }();
  return alphabet;
}

Env sample_input(const DistributionConfig& config, const Signature& sig, Rng& rng)
{
  using Kind = DistributionConfig::Kind;
  if (config.kind == Kind::Enumerated)
  {
    const auto& domain = config.enumerated.domain;
    return domain[uniform_index(rng, 0, domain.size() - 1)];
  }

  std::vector<std::optional<Value>> values(sig.size());
  auto position = [&sig](std::string_view name) {
    std::size_t i = 0;
    while (sig[i].name != name) ++i;
    return i;
  };
  auto rule_kind = [&config](const InputDecl& d) {
    const ArgumentRule* r = config.rule(d.name);
    return r ? r->kind : ArgumentRule::Kind::Free;
  };

  for (std::size_t i = 0; i < sig.size(); ++i)
  {
    if (sig[i].sort != Sort::String || rule_kind(sig[i]) != ArgumentRule::Kind::Free)
    {
      continue;
    }
    values[i] = config.kind == Kind::Mutation ? mutated_seed(config.mutation, rng)
                                              : uniform_string(config.uniform, rng);
  }
  for (std::size_t i = 0; i < sig.size(); ++i)
  {
    if (rule_kind(sig[i]) != ArgumentRule::Kind::SubstringOf) continue;
    const auto& src = std::get<std::string>(*values[position(config.rule(sig[i].name)->source)]);
    values[i] = uniform_substring(src, rng);
  }
  const std::string* first_string = nullptr;
  for (std::size_t i = 0; i < sig.size() && !first_string; ++i)
  {
    if (sig[i].sort == Sort::String) first_string = &std::get<std::string>(*values[i]);
  }
  for (std::size_t i = 0; i < sig.size(); ++i)
  {
    if (sig[i].sort != Sort::Int) continue;
    const ArgumentRule* r = config.rule(sig[i].name);
    const std::string* bound =
        r ? &std::get<std::string>(*values[position(r->source)]) : first_string;
    values[i] = bounded_int(bound, rng);
  }

  Env env;
  for (std::size_t i = 0; i < sig.size(); ++i) env.bind(sig[i].name, std::move(*values[i]));
  return env;
}

std::unique_ptr<Target> make_target(const TaskSpec& task)
{
  if (task.target.kind == TaskTarget::Kind::Dsl)
  {
    return std::make_unique<DslTarget>(*task.target.program);
  }
  return std::make_unique<CommandTarget>(task.target.value, task.output_sort);
}

Example make_example(Target& target, const Env& env)
{
  try
  {
    return Example{env, target.run(env)};
  }
  catch (const OracleError& e)
  {
    if (!e.input().empty()) throw;
    std::string input = env_to_json(env).dump();
    if (dynamic_cast<const ProtocolError*>(&e)) throw ProtocolError(e.what(), input);
    if (dynamic_cast<const TargetTimeout*>(&e)) throw TargetTimeout(e.what(), input);
    if (dynamic_cast<const TargetExited*>(&e)) throw TargetExited(e.what(), input);
    throw OracleError(e.what(), input);
  }
}

SampledSource::SampledSource(const TaskSpec& task, Target& target, std::uint64_t seed)
    : d_task(task), d_target(target), d_rng(seed)
{
}

Example SampledSource::draw()
{
  Env env = sample_input(d_task.distribution, d_task.inputs, d_rng);
  ++d_drawn;
  return make_example(d_target, env);
}

}  // namespace synguar
