#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <functional>
#include <limits>
#include <random>
#include <span>
#include <string>
#include <vector>

#include <omp.h>

namespace latticelab {

// jobs == 1 runs the serial reference kernels; 0 lets OpenMP choose.
struct ExecPolicy {
  int jobs = 0;
  bool serial() const { return jobs == 1; }
};

// Running maximum with its position. Larger value wins, ties go to the lower
// index and NaN never wins, so the combine is associative and commutative and
// any reduction order gives the same result.
struct Best {
  double value = -std::numeric_limits<double>::infinity();
  std::size_t index = static_cast<std::size_t>(-1);

  bool found() const { return index != static_cast<std::size_t>(-1); }
};

inline Best combine(const Best& a, const Best& b) {
  if (!b.found() || std::isnan(b.value)) return a;
  if (!a.found() || std::isnan(a.value)) return b;
  if (b.value > a.value) return b;
  if (a.value > b.value) return a;
  return a.index <= b.index ? a : b;
}

namespace serial {

template <class Fn>
std::vector<double> map(std::size_t count, Fn&& fn) {
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i) out[i] = fn(i);
  return out;
}

template <class Fn>
Best argmax(std::size_t count, Fn&& fn) {
  Best best;
  for (std::size_t i = 0; i < count; ++i) best = combine(best, Best{fn(i), i});
  return best;
}

}  // namespace serial

namespace omp {

namespace detail {

// Exceptions cannot leave a parallel region; keep the one raised at the
// lowest index so the rethrown error does not depend on scheduling.
struct ErrorSlot {
  std::exception_ptr error;
  std::size_t index = static_cast<std::size_t>(-1);

  void record(std::size_t i, std::exception_ptr e) {
#pragma omp critical(latticelab_error_slot)
    {
      if (i < index) {
        index = i;
        error = std::move(e);
      }
    }
  }
  void rethrow() const {
    if (error) std::rethrow_exception(error);
  }
};

inline int threads_for(int jobs) { return jobs > 0 ? jobs : omp_get_max_threads(); }

}  // namespace detail

template <class Fn>
std::vector<double> map(std::size_t count, Fn&& fn, int jobs = 0) {
  std::vector<double> out(count);
  detail::ErrorSlot slot;
  const auto n = static_cast<long long>(count);
#pragma omp parallel for schedule(dynamic, 16) num_threads(detail::threads_for(jobs))
  for (long long i = 0; i < n; ++i) {
    try {
      out[static_cast<std::size_t>(i)] = fn(static_cast<std::size_t>(i));
    } catch (...) {
      slot.record(static_cast<std::size_t>(i), std::current_exception());
    }
  }
  slot.rethrow();
  return out;
}

template <class Fn>
Best argmax(std::size_t count, Fn&& fn, int jobs = 0) {
  Best best;
  detail::ErrorSlot slot;
  const auto n = static_cast<long long>(count);
#pragma omp parallel num_threads(detail::threads_for(jobs))
  {
    Best local;
#pragma omp for schedule(dynamic, 16) nowait
    for (long long i = 0; i < n; ++i) {
      const auto idx = static_cast<std::size_t>(i);
      try {
        local = combine(local, Best{fn(idx), idx});
      } catch (...) {
        slot.record(idx, std::current_exception());
      }
    }
#pragma omp critical(latticelab_argmax)
    best = combine(best, local);
  }
  slot.rethrow();
  return best;
}

}  // namespace omp

template <class Fn>
std::vector<double> parallel_map(std::size_t count, Fn&& fn, ExecPolicy exec) {
  if (exec.serial()) return serial::map(count, std::forward<Fn>(fn));
  return omp::map(count, std::forward<Fn>(fn), exec.jobs);
}

template <class Fn>
Best parallel_argmax(std::size_t count, Fn&& fn, ExecPolicy exec) {
  if (exec.serial()) return serial::argmax(count, std::forward<Fn>(fn));
  return omp::argmax(count, std::forward<Fn>(fn), exec.jobs);
}

struct SearchBudget {
  std::size_t random = 20000;
  std::size_t refine = 200;
};

struct SearchOptions {
  SearchBudget budget;
  std::uint64_t seed = 0;
  ExecPolicy exec;
  // Separates the random streams of different estimators sharing a seed.
  std::uint64_t stream = 0;
  // Relative gain a candidate needs to displace the incumbent; set from the
  // evaluation resolution so rounding noise never picks the witness.
  double margin = 1e-13;
};

// Where candidates come from. Fixed candidates (structured probes, grid,
// warm starts) are evaluated first and do not depend on the budget; random
// candidate i is drawn from its own stream, so a larger budget extends the
// candidate list instead of reshuffling it.
struct SearchSpace {
  std::size_t dim = 0;
  std::vector<std::vector<double>> fixed;
  std::function<std::vector<double>(std::mt19937_64&)> draw;
};

// Objective over scale-invariant candidates. Non-finite returns mark the
// candidate as excluded.
using Objective = std::function<double(std::span<const double>)>;

struct SearchOutcome {
  double value = -std::numeric_limits<double>::infinity();
  std::vector<double> x;
  std::size_t evaluations = 0;
  std::size_t refined_starts = 0;
  bool found = false;
  // "fixed", "random" or "refined"
  std::string origin;
};

// Candidate phase, then first-improvement coordinate pattern search started
// from every running record of the candidate sequence. Records of a prefix
// are the same for every budget extending it, so the reported maximum is
// nondecreasing in both budget components.
SearchOutcome maximize(const SearchSpace& space, const Objective& objective,
                       const SearchOptions& options);

// Pattern search alone: axes in fixed order, +h before -h, first strict
// improvement accepted, h halves after a full unsuccessful sweep.
struct RefineResult {
  std::vector<double> x;
  double value;
  std::size_t polls;
};
RefineResult refine(const Objective& objective, std::vector<double> x0, double f0,
                    std::size_t max_polls, double margin = 1e-13);

// candidate > incumbent * (1 + margin), with non-finite candidates rejected.
bool strictly_better(double candidate, double incumbent, double margin);

}  // namespace latticelab
