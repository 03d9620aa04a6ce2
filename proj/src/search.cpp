#include "latticelab/search.hpp"

#include <algorithm>

#include "latticelab/random.hpp"

namespace latticelab {

bool strictly_better(double candidate, double incumbent, double margin) {
  if (!std::isfinite(candidate)) return false;
  if (!std::isfinite(incumbent)) return true;
  return candidate > incumbent + margin * std::max(1.0, std::abs(incumbent));
}

RefineResult refine(const Objective& objective, std::vector<double> x0, double f0,
                    std::size_t max_polls, double margin) {
  RefineResult r{std::move(x0), f0, 0};
  double scale = 0.0;
  for (double v : r.x) scale = std::max(scale, std::abs(v));
  if (scale == 0.0) scale = 1.0;
  double h = 0.25 * scale;
  std::vector<double> y;
  while (r.polls < max_polls && h > 1e-12 * scale) {
    bool improved = false;
    for (std::size_t k = 0; k < r.x.size() && !improved && r.polls < max_polls; ++k) {
      for (double step : {h, -h}) {
        y = r.x;
        y[k] += step;
        const double fy = objective(y);
        ++r.polls;
        if (strictly_better(fy, r.value, margin)) {
          r.x = std::move(y);
          r.value = fy;
          improved = true;
          break;
        }
        if (r.polls >= max_polls) break;
      }
    }
    if (!improved) h *= 0.5;
  }
  return r;
}

SearchOutcome maximize(const SearchSpace& space, const Objective& objective,
                       const SearchOptions& options) {
  const std::size_t n_fixed = space.fixed.size();
  const std::size_t n_random = space.draw ? options.budget.random : 0;

  std::vector<std::vector<double>> randoms(n_random);
  auto fixed_vals = parallel_map(
      n_fixed, [&](std::size_t i) { return objective(space.fixed[i]); }, options.exec);
  auto random_vals = parallel_map(
      n_random,
      [&](std::size_t i) {
        auto rng = stream_for(options.seed, options.stream, i);
        randoms[i] = space.draw(rng);
        return objective(randoms[i]);
      },
      options.exec);

  auto point = [&](std::size_t i) -> const std::vector<double>& {
    return i < n_fixed ? space.fixed[i] : randoms[i - n_fixed];
  };
  auto value = [&](std::size_t i) { return i < n_fixed ? fixed_vals[i] : random_vals[i - n_fixed]; };

  std::vector<std::size_t> records;
  double running = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n_fixed + n_random; ++i) {
    const double v = value(i);
    if (std::isfinite(v) && (records.empty() || strictly_better(v, running, options.margin))) {
      running = v;
      records.push_back(i);
    }
  }

  std::vector<RefineResult> refined(records.size());
  if (options.budget.refine > 0) {
    parallel_map(
        records.size(),
        [&](std::size_t r) {
          refined[r] = refine(objective, point(records[r]), value(records[r]),
                              options.budget.refine, options.margin);
          return refined[r].value;
        },
        options.exec);
  }

  SearchOutcome out;
  out.evaluations = n_fixed + n_random;
  out.refined_starts = options.budget.refine > 0 ? records.size() : 0;
  if (records.empty()) return out;

  out.found = true;
  const std::size_t top = records.back();
  out.value = value(top);
  out.x = point(top);
  out.origin = top < n_fixed ? "fixed" : "random";
  if (options.budget.refine > 0) {
    for (auto& r : refined) {
      out.evaluations += r.polls;
      if (strictly_better(r.value, out.value, options.margin)) {
        out.value = r.value;
        out.x = r.x;
        out.origin = "refined";
      }
    }
  }
  return out;
}

}  // namespace latticelab
