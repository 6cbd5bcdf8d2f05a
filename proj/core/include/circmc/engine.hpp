#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "circmc/initial.hpp"
#include "circmc/kernels.hpp"

namespace circmc {

enum class RunStatus { Coalesced, WrapFailed, SplitCycles, CapExceeded };

std::string to_string(RunStatus status);
RunStatus parse_run_status(const std::string& s);

struct CoalescenceCount {
  std::size_t steps = 0;
  bool censored = false;
};

/// Boundary handoff: the state at the start of `segment_index`, produced by
/// the previous segment. `generation` counts how many boundary values the
/// sending segment has emitted so far.
struct SegmentMessage {
  std::size_t segment_index = 0;
  ChainState boundary_state;
  std::size_t generation = 0;
};

/// One re-simulation by one worker.
struct ResimulationRecord {
  std::size_t segment = 0;
  std::size_t evaluations = 0;
  bool coalesced = false;  // matched its previous pass before the segment end
};

struct ParallelReport {
  std::size_t r = 0;
  std::vector<std::size_t> new_starts;   // per segment
  std::vector<std::size_t> evaluations;  // per segment, including the first pass
  std::vector<std::vector<ResimulationRecord>> rounds;  // re-simulation rounds, in order
  std::size_t max_new_starts = 0;
  std::size_t distinct_cycles = 0;  // filled by the split check after a cap hit
  std::vector<ChainState> initial_states;
};

struct CircularRunResult {
  std::vector<ChainState> y_trace;  // y_0 .. y_{N-1}
  std::vector<ChainState> x_trace;  // x_0 .. x_N (sequential engines only)
  std::vector<CoalescenceCount> coalescence;  // c_0 .. c_{r-1}
  RunStatus status = RunStatus::WrapFailed;
  std::size_t evaluations = 0;  // total applications of phi
  std::optional<ParallelReport> parallel;
};

/// phi(state, u_t) with u_t = block_for(seed, t, budget).
ChainState transition(const Kernel& kernel, const ChainState& state, std::uint64_t seed,
                      std::uint64_t t);

/// States at times start_time, start_time+1, ..., start_time+steps, with the
/// block index taken modulo n.
std::vector<ChainState> simulate_from(const Kernel& kernel, const ChainState& start,
                                      std::uint64_t seed, std::size_t start_time,
                                      std::size_t steps, std::size_t n);

/// x_0 ~ p0, x_t = phi(x_{t-1}, u_{t-1}); returns x_0..x_N.
std::vector<ChainState> run_standard(const Kernel& kernel, const InitialDistribution& p0,
                                     std::uint64_t seed, std::size_t n);

/// The wrapped-around chain y started from y_0 = x_N. c_0 is censored at N.
CircularRunResult run_circular_basic(const Kernel& kernel, const InitialDistribution& p0,
                                     std::uint64_t seed, std::size_t n);

/// Basic run plus r-1 auxiliary chains started at times iN/r from fresh p0
/// draws; every c_i is censored at k. Requires r | N and k < N/2.
CircularRunResult run_with_diagnostics(const Kernel& kernel, const InitialDistribution& p0,
                                       std::uint64_t seed, std::size_t n, std::size_t r,
                                       std::size_t k);

struct ParallelOptions {
  enum class Schedule { Rounds, Shuffled };

  std::size_t r = 10;
  std::size_t max_restarts = 0;  // 0 means r
  std::size_t threads = 1;       // worker threads within a round
  Schedule schedule = Schedule::Rounds;
  std::uint64_t schedule_seed = 0;  // message order for Shuffled
};

/// r segment workers exchanging boundary states until none changes.
/// Requires r | N.
CircularRunResult run_parallel(const Kernel& kernel, const InitialDistribution& p0,
                               std::uint64_t seed, std::size_t n, const ParallelOptions& options);

/// Averages of each function over y_0..y_{N-1}. Throws std::logic_error when
/// the run hit the restart cap.
std::vector<double> estimate_expectations(
    const CircularRunResult& result,
    const std::vector<std::function<double(const ChainState&)>>& functions);

}  // namespace circmc
