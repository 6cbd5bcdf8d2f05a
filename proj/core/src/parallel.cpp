#include <algorithm>
#include <random>
#include <stdexcept>
#include <thread>

#include "circmc/engine.hpp"

namespace circmc {

namespace {

struct Worker {
  std::size_t index = 0;
  std::size_t start_time = 0;
  std::vector<ChainState> states;  // times start_time .. start_time + L
  std::size_t new_starts = 0;
  std::size_t emitted = 0;
  std::size_t evaluations = 0;
  std::optional<SegmentMessage> inbox;
};

struct Outcome {
  std::optional<SegmentMessage> outgoing;
  std::optional<ResimulationRecord> record;
  bool over_cap = false;
};

class SegmentRunner {
 public:
  SegmentRunner(const Kernel& kernel, std::uint64_t seed, std::size_t n, std::size_t r,
                std::size_t max_restarts)
      : kernel_(kernel), seed_(seed), n_(n), r_(r), length_(n / r), max_restarts_(max_restarts) {}

  std::size_t length() const { return length_; }

  SegmentMessage first_pass(Worker& w, ChainState start) const {
    w.states.assign(length_ + 1, ChainState{});
    w.states[0] = std::move(start);
    for (std::size_t j = 1; j <= length_; ++j) {
      w.states[j] = transition(kernel_, w.states[j - 1], seed_, (w.start_time + j - 1) % n_);
    }
    w.evaluations += length_;
    return emit(w);
  }

  Outcome receive(Worker& w, const SegmentMessage& message) const {
    Outcome out;
    if (message.boundary_state == w.states[0]) return out;
    ++w.new_starts;
    if (w.new_starts > max_restarts_) {
      out.over_cap = true;
      return out;
    }
    w.states[0] = message.boundary_state;
    ResimulationRecord record{w.index, 0, false};
    for (std::size_t j = 1; j < length_; ++j) {
      ChainState v = transition(kernel_, w.states[j - 1], seed_, (w.start_time + j - 1) % n_);
      ++record.evaluations;
      if (v == w.states[j]) {
        record.coalesced = true;
        break;
      }
      w.states[j] = std::move(v);
    }
    if (!record.coalesced) {
      ChainState z =
          transition(kernel_, w.states[length_ - 1], seed_, (w.start_time + length_ - 1) % n_);
      ++record.evaluations;
      if (z != w.states[length_]) {
        w.states[length_] = std::move(z);
        out.outgoing = emit(w);
      }
    }
    w.evaluations += record.evaluations;
    out.record = record;
    return out;
  }

 private:
  SegmentMessage emit(Worker& w) const {
    ++w.emitted;
    return SegmentMessage{(w.index + 1) % r_, w.states[length_], w.emitted};
  }

  const Kernel& kernel_;
  std::uint64_t seed_;
  std::size_t n_;
  std::size_t r_;
  std::size_t length_;
  std::size_t max_restarts_;
};

void deliver(std::vector<Worker>& workers, SegmentMessage message) {
  auto& inbox = workers[message.segment_index].inbox;
  if (!inbox || inbox->generation < message.generation) inbox = std::move(message);
}

// Follows every worker's current start around the ring until it closes into
// a cycle (a fixed point of the N-step map) and counts the distinct cycles.
std::size_t count_distinct_cycles(const Kernel& kernel, std::uint64_t seed, std::size_t n,
                                  const std::vector<Worker>& workers, std::size_t& evaluations) {
  constexpr std::size_t kMaxLaps = 10;
  std::vector<std::vector<ChainState>> cycles;  // full cycles, indexed by time
  for (const auto& w : workers) {
    ChainState a = w.states[0];
    for (std::size_t lap = 0; lap < kMaxLaps; ++lap) {
      const bool known = std::any_of(cycles.begin(), cycles.end(), [&](const auto& c) {
        return c[w.start_time] == a;
      });
      if (known) break;
      auto path = simulate_from(kernel, a, seed, w.start_time, n, n);
      evaluations += n;
      if (path.back() == a) {
        std::vector<ChainState> cycle(n);
        for (std::size_t j = 0; j < n; ++j) cycle[(w.start_time + j) % n] = path[j];
        cycles.push_back(std::move(cycle));
        break;
      }
      a = path.back();
    }
  }
  return cycles.size();
}

}  // namespace

CircularRunResult run_parallel(const Kernel& kernel, const InitialDistribution& p0,
                               std::uint64_t seed, std::size_t n, const ParallelOptions& options) {
  const std::size_t r = options.r;
  if (r == 0 || n % r != 0) throw std::invalid_argument("r must divide N");
  const std::size_t max_restarts = options.max_restarts == 0 ? r : options.max_restarts;
  const SegmentRunner runner(kernel, seed, n, r, max_restarts);

  ParallelReport report;
  report.r = r;
  std::vector<Worker> workers(r);
  std::vector<SegmentMessage> first;
  for (std::size_t i = 0; i < r; ++i) {
    workers[i].index = i;
    workers[i].start_time = i * runner.length();
    ChainState start = draw_initial(p0, seed, i);
    report.initial_states.push_back(start);
    first.push_back(runner.first_pass(workers[i], std::move(start)));
  }
  for (auto& m : first) deliver(workers, std::move(m));

  bool over_cap = false;
  if (options.schedule == ParallelOptions::Schedule::Rounds) {
    while (!over_cap) {
      std::vector<std::size_t> active;
      for (std::size_t i = 0; i < r; ++i) {
        if (workers[i].inbox) active.push_back(i);
      }
      if (active.empty()) break;
      std::vector<Outcome> outcomes(active.size());
      auto work = [&](std::size_t from, std::size_t to) {
        for (std::size_t a = from; a < to; ++a) {
          Worker& w = workers[active[a]];
          SegmentMessage message = std::move(*w.inbox);
          w.inbox.reset();
          outcomes[a] = runner.receive(w, message);
        }
      };
      const std::size_t threads = std::min(std::max<std::size_t>(options.threads, 1), active.size());
      if (threads <= 1) {
        work(0, active.size());
      } else {
        std::vector<std::thread> pool;
        const std::size_t chunk = (active.size() + threads - 1) / threads;
        for (std::size_t from = 0; from < active.size(); from += chunk) {
          pool.emplace_back(work, from, std::min(active.size(), from + chunk));
        }
        for (auto& t : pool) t.join();
      }
      std::vector<ResimulationRecord> round;
      for (auto& o : outcomes) {
        over_cap = over_cap || o.over_cap;
        if (o.record) round.push_back(*o.record);
        if (o.outgoing) deliver(workers, std::move(*o.outgoing));
      }
      if (!round.empty()) report.rounds.push_back(std::move(round));
    }
  } else {
    std::mt19937_64 order(options.schedule_seed);
    while (!over_cap) {
      std::vector<std::size_t> active;
      for (std::size_t i = 0; i < r; ++i) {
        if (workers[i].inbox) active.push_back(i);
      }
      if (active.empty()) break;
      std::uniform_int_distribution<std::size_t> pick(0, active.size() - 1);
      Worker& w = workers[active[pick(order)]];
      SegmentMessage message = std::move(*w.inbox);
      w.inbox.reset();
      Outcome o = runner.receive(w, message);
      over_cap = o.over_cap;
      if (o.record) report.rounds.push_back({*o.record});
      if (o.outgoing) deliver(workers, std::move(*o.outgoing));
    }
  }

  CircularRunResult result;
  for (const auto& w : workers) {
    report.new_starts.push_back(w.new_starts);
    report.evaluations.push_back(w.evaluations);
    result.evaluations += w.evaluations;
    report.max_new_starts = std::max(report.max_new_starts, w.new_starts);
    for (std::size_t j = 0; j < runner.length(); ++j) result.y_trace.push_back(w.states[j]);
  }

  bool consistent = !over_cap;
  for (std::size_t i = 0; consistent && i < r; ++i) {
    consistent = workers[i].states[runner.length()] == workers[(i + 1) % r].states[0];
  }
  if (consistent) {
    result.status = RunStatus::Coalesced;
    report.distinct_cycles = 1;
  } else {
    report.distinct_cycles = count_distinct_cycles(kernel, seed, n, workers, result.evaluations);
    result.status = report.distinct_cycles >= 2 ? RunStatus::SplitCycles : RunStatus::CapExceeded;
  }
  result.parallel = std::move(report);
  return result;
}

}  // namespace circmc
