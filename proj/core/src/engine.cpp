#include "circmc/engine.hpp"

#include <stdexcept>

namespace circmc {

std::string to_string(RunStatus status) {
  switch (status) {
    case RunStatus::Coalesced:
      return "coalesced";
    case RunStatus::WrapFailed:
      return "wrap_failed";
    case RunStatus::SplitCycles:
      return "split_cycles";
    case RunStatus::CapExceeded:
      return "cap_exceeded";
  }
  return "unknown";
}

RunStatus parse_run_status(const std::string& s) {
  for (RunStatus st : {RunStatus::Coalesced, RunStatus::WrapFailed, RunStatus::SplitCycles,
                       RunStatus::CapExceeded}) {
    if (to_string(st) == s) return st;
  }
  throw std::invalid_argument("unknown run status '" + s + "'");
}

ChainState transition(const Kernel& kernel, const ChainState& state, std::uint64_t seed,
                      std::uint64_t t) {
  ChainState next = state;
  kernel.apply(next, block_for(seed, t, static_cast<std::int64_t>(kernel.budget())));
  return next;
}

std::vector<ChainState> simulate_from(const Kernel& kernel, const ChainState& start,
                                      std::uint64_t seed, std::size_t start_time,
                                      std::size_t steps, std::size_t n) {
  if (n == 0) throw std::invalid_argument("simulate_from: n must be positive");
  std::vector<ChainState> out;
  out.reserve(steps + 1);
  out.push_back(start);
  for (std::size_t i = 0; i < steps; ++i) {
    out.push_back(transition(kernel, out.back(), seed, (start_time + i) % n));
  }
  return out;
}

std::vector<ChainState> run_standard(const Kernel& kernel, const InitialDistribution& p0,
                                     std::uint64_t seed, std::size_t n) {
  if (n < 1) throw std::invalid_argument("run_standard: N must be at least 1");
  return simulate_from(kernel, draw_initial(p0, seed, 0), seed, 0, n, n);
}

namespace {

struct WrapOutcome {
  std::vector<ChainState> x;
  std::vector<ChainState> y;
  std::optional<std::size_t> coalesced_at;
  std::size_t evaluations = 0;
};

WrapOutcome wrap_around(const Kernel& kernel, const InitialDistribution& p0, std::uint64_t seed,
                        std::size_t n) {
  if (n < 2) throw std::invalid_argument("circular run: N must be at least 2");
  WrapOutcome out;
  out.x = run_standard(kernel, p0, seed, n);
  out.evaluations = n;
  out.y.reserve(n + 1);
  out.y.push_back(out.x[n]);
  std::size_t t = 0;
  while (t < n && out.y[t] != out.x[t]) {
    out.y.push_back(transition(kernel, out.y[t], seed, t));
    ++out.evaluations;
    ++t;
  }
  if (out.y[t] == out.x[t]) out.coalesced_at = t;
  for (std::size_t s = t + 1; s <= n; ++s) out.y.push_back(out.x[s]);
  return out;
}

CoalescenceCount censor(std::optional<std::size_t> steps, std::size_t cap) {
  if (steps && *steps <= cap) return {*steps, false};
  return {cap, true};
}

}  // namespace

CircularRunResult run_circular_basic(const Kernel& kernel, const InitialDistribution& p0,
                                     std::uint64_t seed, std::size_t n) {
  WrapOutcome w = wrap_around(kernel, p0, seed, n);
  CircularRunResult result;
  result.status = w.coalesced_at ? RunStatus::Coalesced : RunStatus::WrapFailed;
  result.coalescence.push_back(censor(w.coalesced_at, n));
  result.evaluations = w.evaluations;
  w.y.pop_back();
  result.y_trace = std::move(w.y);
  result.x_trace = std::move(w.x);
  return result;
}

CircularRunResult run_with_diagnostics(const Kernel& kernel, const InitialDistribution& p0,
                                       std::uint64_t seed, std::size_t n, std::size_t r,
                                       std::size_t k) {
  if (r == 0 || n % r != 0) throw std::invalid_argument("r must divide N");
  if (2 * k >= n) throw std::invalid_argument("k must be less than N/2");
  CircularRunResult result = run_circular_basic(kernel, p0, seed, n);
  result.coalescence[0] = censor(
      result.status == RunStatus::Coalesced ? std::optional(result.coalescence[0].steps)
                                            : std::nullopt,
      k);
  for (std::size_t i = 1; i < r; ++i) {
    const std::size_t start = i * n / r;
    ChainState z = draw_initial(p0, seed, i);
    std::size_t t = start;
    std::size_t steps = 0;
    while (steps < k && z != result.y_trace[t]) {
      z = transition(kernel, z, seed, t);
      t = (t + 1) % n;
      ++steps;
      ++result.evaluations;
    }
    const bool met = z == result.y_trace[t];
    result.coalescence.push_back(met ? CoalescenceCount{steps, false}
                                     : CoalescenceCount{k, true});
  }
  return result;
}

std::vector<double> estimate_expectations(
    const CircularRunResult& result,
    const std::vector<std::function<double(const ChainState&)>>& functions) {
  if (result.status == RunStatus::CapExceeded) {
    throw std::logic_error("estimate_expectations: run exceeded the restart cap");
  }
  if (result.y_trace.empty()) throw std::logic_error("estimate_expectations: empty trace");
  std::vector<double> out;
  out.reserve(functions.size());
  for (const auto& f : functions) {
    double total = 0.0;
    for (const auto& y : result.y_trace) total += f(y);
    out.push_back(total / static_cast<double>(result.y_trace.size()));
  }
  return out;
}

}  // namespace circmc
