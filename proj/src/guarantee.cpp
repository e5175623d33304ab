#include "synguar/guarantee.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

#include "synguar/errors.hpp"

namespace synguar {

GuaranteeParams::GuaranteeParams(double epsilon, double delta, std::size_t step_k)
    : d_epsilon(epsilon), d_delta(delta), d_step_k(step_k)
{
  if (!(epsilon > 0.0 && epsilon < 1.0))
  {
    throw std::invalid_argument("epsilon must lie in (0,1)");
  }
  if (!(delta > 0.0 && delta < 1.0))
  {
    throw std::invalid_argument("delta must lie in (0,1)");
  }
  if (step_k == 0)
  {
    throw std::invalid_argument("step_k must be positive");
  }
  d_within_bound = step_k <= optimality_step_bound();
}

std::size_t GuaranteeParams::optimality_step_bound() const
{
  return static_cast<std::size_t>(
      std::floor(std::log(1.0 / d_delta) / (2.0 * d_epsilon)));
}

std::uint64_t sample_complexity(const HypothesisSize& size, double epsilon,
                                double delta)
{
  if (size.empty())
  {
    throw std::domain_error("sample complexity of an empty hypothesis space");
  }
  long double ln_inv_delta = -std::log(static_cast<long double>(delta));
  ln_inv_delta += 1e-12L * (1.0L + ln_inv_delta);
  long double bound = (size.ln_upper() + ln_inv_delta) / epsilon;
  return static_cast<std::uint64_t>(std::floor(bound)) + 1;
}

std::uint64_t default_g(const HypothesisSize& size, double epsilon, double delta)
{
  double value = (size.ln_estimate() + std::log(delta)) / epsilon;
  // Rounding noise around integers resolves downward; g only steers sampling.
  if (value <= 1e-9) return 0;
  return static_cast<std::uint64_t>(std::ceil(value - 1e-9));
}

StoppingFunction default_stopping(double epsilon, double delta)
{
  return [epsilon, delta](const HypothesisSize& size) {
    return default_g(size, epsilon, delta);
  };
}

Example ReplaySource::draw()
{
  if (d_next >= d_examples.size()) throw OracleExhausted();
  return d_examples[d_next++];
}

std::string_view phase_name(Phase p)
{
  return p == Phase::Sampling ? "sampling" : "validation";
}

std::string trace_csv(std::span<const TraceRow> rows)
{
  std::ostringstream out;
  out << "iteration,samples_seen,tier,size_upper,threshold,phase\n";
  for (const auto& r : rows)
  {
    out << r.iteration << ',' << r.samples_seen << ',' << r.tier << ','
        << r.size_upper.to_string() << ',' << r.threshold << ','
        << phase_name(r.phase) << '\n';
  }
  return out.str();
}

namespace {

class Loop
{
 public:
  Loop(ExampleSource& oracle, SynthesisEngine& engine, const GuaranteeParams& params,
       const StoppingFunction& g, int tier, std::span<const Example> prior,
       std::size_t first_iteration)
      : d_oracle(oracle),
        d_engine(engine),
        d_params(params),
        d_g(g),
        d_prior(prior),
        d_iteration(first_iteration)
  {
    d_state.tier = tier;
  }

  RunResult run()
  {
    d_engine.update_hypothesis({});
    HypothesisSize size = d_engine.compute_size();
    d_state.threshold = size.empty() ? 0 : d_g(size);
    record(size, Phase::Sampling);
    if (size.empty()) return finish(std::nullopt, 0);

    const std::size_t k = d_params.step_k();
    while (d_state.samples_seen <= d_state.threshold)
    {
      for (std::size_t i = 0; i < k; ++i) d_state.examples.push_back(next_sampling());
      d_engine.update_hypothesis(d_state.examples);
      size = d_engine.compute_size();
      d_state.samples_seen += k;
      if (size.empty())
      {
        record(size, Phase::Sampling);
        return finish(std::nullopt, 0);
      }
      d_state.threshold =
          std::min<std::uint64_t>(d_state.threshold, d_state.samples_seen + d_g(size));
      record(size, Phase::Sampling);
    }

    std::uint64_t m = sample_complexity(size, d_params.epsilon(), d_params.delta());
    while (d_prior_next < d_prior.size())
    {
      d_state.examples.push_back(d_prior[d_prior_next++]);
    }
    for (std::uint64_t i = 0; i < m; ++i) d_state.examples.push_back(d_oracle.draw());
    d_engine.update_hypothesis(d_state.examples);
    size = d_engine.compute_size();
    d_state.samples_seen = d_state.examples.size();
    record(size, Phase::Validation);
    if (size.empty()) return finish(std::nullopt, m);
    return finish(d_engine.pick_program(), m);
  }

 private:
  Example next_sampling()
  {
    if (d_prior_next < d_prior.size()) return d_prior[d_prior_next++];
    return d_oracle.draw();
  }

  void record(const HypothesisSize& size, Phase phase)
  {
    d_state.trace.push_back({d_iteration++, d_state.samples_seen, d_state.tier, size,
                             d_state.threshold, phase});
  }

  RunResult finish(std::optional<Program> program, std::uint64_t m)
  {
    // Unconsumed prior examples were still drawn; keep them for later tiers.
    while (d_prior_next < d_prior.size())
    {
      d_state.examples.push_back(d_prior[d_prior_next++]);
    }
    RunResult r;
    r.outcome.result = std::move(program);
    r.outcome.validation_samples = m;
    r.outcome.total_samples = d_state.examples.size();
    r.state = std::move(d_state);
    return r;
  }

  ExampleSource& d_oracle;
  SynthesisEngine& d_engine;
  const GuaranteeParams& d_params;
  const StoppingFunction& d_g;
  std::span<const Example> d_prior;
  std::size_t d_prior_next = 0;
  std::size_t d_iteration;
  LoopState d_state;
};

// Caches sizes by prefix length. Valid only when every update is a prefix of
// one fixed sequence.
class PrefixCachedEngine : public SynthesisEngine
{
 public:
  explicit PrefixCachedEngine(SynthesisEngine& inner) : d_inner(inner) {}

  void update_hypothesis(std::span<const Example> examples) override
  {
    d_current = examples;
  }

  HypothesisSize compute_size() override
  {
    auto it = d_sizes.find(d_current.size());
    if (it != d_sizes.end()) return it->second;
    sync();
    HypothesisSize size = d_inner.compute_size();
    d_sizes.emplace(d_current.size(), size);
    return size;
  }

  std::optional<Program> pick_program() override
  {
    sync();
    return d_inner.pick_program();
  }

 private:
  void sync()
  {
    if (d_synced != d_current.size() || !d_has_synced)
    {
      d_inner.update_hypothesis(d_current);
      d_synced = d_current.size();
      d_has_synced = true;
    }
  }

  SynthesisEngine& d_inner;
  std::span<const Example> d_current;
  std::map<std::size_t, HypothesisSize> d_sizes;
  std::size_t d_synced = 0;
  bool d_has_synced = false;
};

}  // namespace

RunResult run_synguar(ExampleSource& oracle, SynthesisEngine& engine,
                      const GuaranteeParams& params, const StoppingFunction& g,
                      int tier, std::span<const Example> prior)
{
  return Loop(oracle, engine, params, g, tier, prior, 0).run();
}

RunResult run_tiered(ExampleSource& oracle, std::span<SynthesisEngine* const> engines,
                     const GuaranteeParams& params)
{
  if (engines.empty())
  {
    throw std::invalid_argument("run_tiered needs at least one engine");
  }
  // Union bound across tiers.
  GuaranteeParams tier_params =
      params.with_delta(params.delta() / static_cast<double>(engines.size()));
  StoppingFunction g = default_stopping(tier_params.epsilon(), tier_params.delta());

  RunResult combined;
  std::size_t iteration = 0;
  for (std::size_t t = 0; t < engines.size(); ++t)
  {
    std::vector<Example> prior = std::move(combined.state.examples);
    std::vector<TraceRow> trace = std::move(combined.state.trace);

    Loop loop(oracle, *engines[t], tier_params, g, static_cast<int>(t), prior,
              iteration);
    RunResult r = loop.run();
    iteration = r.state.trace.empty() ? iteration : r.state.trace.back().iteration + 1;

    trace.insert(trace.end(), r.state.trace.begin(), r.state.trace.end());
    r.state.trace = std::move(trace);
    combined = std::move(r);
    if (combined.outcome.result) break;
  }
  combined.outcome.total_samples = combined.state.examples.size();
  return combined;
}

std::vector<ReplayTotal> replay_with_g(std::span<const Example> recorded,
                                       SynthesisEngine& engine,
                                       const GuaranteeParams& params,
                                       std::span<const StoppingFunction> family)
{
  if (family.empty())
  {
    throw std::invalid_argument("replay_with_g needs at least one stopping function");
  }
  PrefixCachedEngine cached(engine);
  std::vector<ReplayTotal> totals;
  for (const auto& g : family)
  {
    ReplaySource source({recorded.begin(), recorded.end()});
    RunResult r = run_synguar(source, cached, params, g);
    totals.push_back({r.outcome.total_samples, r.outcome.result.has_value()});
  }
  return totals;
}

}  // namespace synguar
