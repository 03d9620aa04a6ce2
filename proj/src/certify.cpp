#include "latticelab/certify.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

#include "latticelab/random.hpp"

namespace latticelab {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr std::size_t kExhaustiveSets = 20;
constexpr std::size_t kExhaustiveVertices = 10;
constexpr std::size_t kSampledPatterns = 256;
constexpr std::size_t kInteriorMultipliers = 16;
constexpr double kViolationSlack = 1e-9;

enum Stream : std::uint64_t {
  kRestrictionStream = 1,
  kMonotoneStream = 2,
  kSignStream = 3,
  kLipschitzStream = 4,
  kMultiplierStream = 5,
  kVNormStream = 6,
  kPatternStream = 7,
  kCoordinateStream = 100,
};

using Vec = std::vector<double>;

std::vector<std::size_t> support_of(std::span<const double> x) {
  std::vector<std::size_t> s;
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (x[k] != 0.0) s.push_back(k);
  }
  return s;
}

double sup_abs(std::span<const double> x) {
  double m = 0.0;
  for (double v : x) m = std::max(m, std::abs(v));
  return m;
}

Vec ones(std::size_t n) { return Vec(n, 1.0); }

// Structured candidates on R^n: constant, basis vectors, alternating signs,
// interval indicators, every indicator for small n, and the
// {0, +-1/2, +-1} grid (sup-normalized) for n <= 6.
std::vector<Vec> function_probes(std::size_t n) {
  std::vector<Vec> out;
  out.push_back(ones(n));
  for (std::size_t k = 0; k < n; ++k) {
    Vec e(n, 0.0);
    e[k] = 1.0;
    out.push_back(std::move(e));
  }
  {
    Vec alt(n);
    for (std::size_t k = 0; k < n; ++k) alt[k] = (k % 2 == 0) ? 1.0 : -1.0;
    out.push_back(std::move(alt));
  }
  for (std::size_t k = 2; k < n; ++k) {
    Vec pre(n, 0.0);
    Vec suf(n, 0.0);
    for (std::size_t i = 0; i < k; ++i) pre[i] = 1.0;
    for (std::size_t i = n - k; i < n; ++i) suf[i] = 1.0;
    out.push_back(std::move(pre));
    out.push_back(std::move(suf));
  }
  if (n <= 8) {
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n); ++mask) {
      if (std::popcount(mask) < 2 || std::popcount(mask) == static_cast<int>(n)) continue;
      Vec v(n, 0.0);
      for (std::size_t k = 0; k < n; ++k) v[k] = (mask >> k) & 1u ? 1.0 : 0.0;
      out.push_back(std::move(v));
    }
  }
  if (n <= 6) {
    static constexpr double kLevels[] = {1.0, 0.5, 0.0, -0.5, -1.0};
    std::size_t total = 1;
    for (std::size_t k = 0; k < n; ++k) total *= 5;
    Vec v(n);
    for (std::size_t code = 0; code < total; ++code) {
      std::size_t c = code;
      for (std::size_t k = 0; k < n; ++k) {
        v[k] = kLevels[c % 5];
        c /= 5;
      }
      if (sup_abs(v) == 1.0) out.push_back(v);
    }
  }
  return out;
}

std::vector<Vec> nonnegative_probes(std::size_t n) {
  std::vector<Vec> out;
  for (auto& v : function_probes(n)) {
    bool nonneg = true;
    for (double x : v) nonneg = nonneg && x >= 0.0;
    if (nonneg) out.push_back(std::move(v));
  }
  return out;
}

void append_warm(std::vector<Vec>& fixed, const std::vector<Func>& warm, std::size_t n,
                 bool absolute) {
  for (const auto& w : warm) {
    if (w.size() != n) throw DimensionError("warm start has wrong dimension");
    Vec v = w.values();
    if (absolute) {
      for (double& x : v) x = std::abs(x);
    }
    fixed.push_back(std::move(v));
  }
}

SearchOptions search_options(const NormOracle& norm, const CertifyOptions& opt,
                             std::uint64_t stream) {
  SearchOptions s;
  s.budget = opt.budget;
  s.seed = opt.seed;
  s.exec = opt.exec;
  s.stream = stream;
  s.margin = std::max(1e-13, 2.0 * norm.resolution());
  return s;
}

// Fixed pseudo-random masks shared by every candidate of an estimator; the
// objective must be a deterministic function of the point alone.
std::vector<std::uint64_t> pattern_masks(std::uint64_t seed, std::size_t m) {
  auto rng = stream_for(seed, kPatternStream, m);
  std::vector<std::uint64_t> out;
  const std::uint64_t full = (m >= 64) ? ~std::uint64_t{0} : (std::uint64_t{1} << m) - 1;
  out.push_back(full);
  for (std::size_t b = 0; b < m && b < 64; ++b) {
    out.push_back(std::uint64_t{1} << b);
    out.push_back(full & ~(std::uint64_t{1} << b));
  }
  for (std::size_t i = 0; i < kSampledPatterns; ++i) {
    const std::uint64_t mask = rng() & full;
    if (mask != 0) out.push_back(mask);
  }
  return out;
}

std::vector<Vec> fixed_multipliers(std::uint64_t seed, std::uint64_t stream, std::size_t n,
                                   double lo) {
  auto rng = stream_for(seed, stream, 0xfeed);
  std::vector<Vec> out(kInteriorMultipliers, Vec(n));
  for (auto& m : out) {
    for (double& v : m) v = uniform(rng, lo, 1.0);
  }
  return out;
}

// Maximizes norm(y) over y obtained from x by zeroing (or sign-flipping) the
// coordinates selected by a mask over the support. Masks are visited in Gray
// code order so each step toggles a single coordinate.
struct MaskScan {
  double best = -std::numeric_limits<double>::infinity();
  std::uint64_t mask = 0;
};

enum class Toggle { kZero, kFlip };

MaskScan scan_masks(const NormOracle& norm, std::span<const double> x,
                    const std::vector<std::size_t>& support, std::size_t bits, Toggle toggle,
                    bool start_full) {
  Vec y(x.begin(), x.end());
  if (toggle == Toggle::kZero && !start_full) {
    for (std::size_t k : support) y[k] = 0.0;
  }
  MaskScan scan;
  const std::uint64_t count = std::uint64_t{1} << bits;
  std::uint64_t gray = 0;
  for (std::uint64_t i = 0; i < count; ++i) {
    if (i > 0) {
      const auto b = static_cast<std::size_t>(std::countr_zero(i));
      gray ^= std::uint64_t{1} << b;
      const std::size_t k = support[b];
      if (toggle == Toggle::kFlip) {
        y[k] = -y[k];
      } else {
        y[k] = (y[k] == 0.0) ? x[k] : 0.0;
      }
    } else if (toggle == Toggle::kZero && !start_full) {
      continue;  // empty set
    }
    const double v = norm(y);
    if (v > scan.best) {
      scan.best = v;
      scan.mask = gray;
    }
  }
  return scan;
}

Vec apply_zero_mask(std::span<const double> x, const std::vector<std::size_t>& support,
                    std::uint64_t mask) {
  Vec y(x.size(), 0.0);
  for (std::size_t b = 0; b < support.size(); ++b) {
    if ((mask >> b) & 1u) y[support[b]] = x[support[b]];
  }
  return y;
}

Vec apply_flip_mask(std::span<const double> x, const std::vector<std::size_t>& support,
                    std::uint64_t mask) {
  Vec y(x.begin(), x.end());
  for (std::size_t b = 0; b < support.size(); ++b) {
    if ((mask >> b) & 1u) y[support[b]] = -y[support[b]];
  }
  return y;
}

// ---- restriction ---------------------------------------------------------

struct RestrictionInner {
  const NormOracle& norm;
  std::uint64_t seed;

  struct Result {
    double ratio = kNaN;
    Vec restricted;
  };

  Result eval(std::span<const double> x, bool keep) const {
    Result r;
    const auto support = support_of(x);
    if (support.empty()) return r;
    const double den = norm(x);
    if (!(den > 0.0) || !std::isfinite(den)) return r;
    const std::size_t m = support.size();
    if (m <= kExhaustiveSets) {
      // Start from the full support and toggle coordinates out and in.
      MaskScan best;
      Vec y(x.begin(), x.end());
      const std::uint64_t full = (std::uint64_t{1} << m) - 1;
      std::uint64_t gray = 0;
      for (std::uint64_t i = 0; i < (std::uint64_t{1} << m); ++i) {
        if (i > 0) {
          const auto b = static_cast<std::size_t>(std::countr_zero(i));
          gray ^= std::uint64_t{1} << b;
          const std::size_t k = support[b];
          y[k] = (y[k] == 0.0) ? x[k] : 0.0;
        }
        const std::uint64_t kept = full & ~gray;
        if (kept == 0) continue;
        const double v = norm(y);
        if (v > best.best) {
          best.best = v;
          best.mask = kept;
        }
      }
      r.ratio = best.best / den;
      if (keep) r.restricted = apply_zero_mask(x, support, best.mask);
      return r;
    }
    double best = -std::numeric_limits<double>::infinity();
    std::uint64_t arg = 0;
    for (std::uint64_t mask : pattern_masks(seed, m)) {
      const double v = norm(apply_zero_mask(x, support, mask));
      if (v > best) {
        best = v;
        arg = mask;
      }
    }
    r.ratio = best / den;
    if (keep) r.restricted = apply_zero_mask(x, support, arg);
    return r;
  }
};

// ---- sign patterns / multipliers ----------------------------------------

struct SignInner {
  const NormOracle& norm;
  std::uint64_t seed;
  std::vector<Vec> interior;  // empty for the unconditional constant

  struct Result {
    double ratio = kNaN;
    Vec image;  // eps . x or m . x at the max
    bool from_sign = true;
  };

  Result eval(std::span<const double> x, bool keep) const {
    Result r;
    const auto support = support_of(x);
    if (support.empty()) return r;
    const double den = norm(x);
    if (!(den > 0.0) || !std::isfinite(den)) return r;
    const std::size_t m = support.size();
    // The last support coordinate keeps its sign: eps and -eps give equal norms.
    double best = -std::numeric_limits<double>::infinity();
    std::uint64_t arg = 0;
    if (m - 1 <= kExhaustiveSets - 1) {
      auto scan = scan_masks(norm, x, support, m - 1, Toggle::kFlip, true);
      best = scan.best;
      arg = scan.mask;
    } else {
      const std::uint64_t low = (std::uint64_t{1} << std::min<std::size_t>(m - 1, 63)) - 1;
      for (std::uint64_t mask : pattern_masks(seed, m)) {
        mask &= low;
        const double v = norm(apply_flip_mask(x, support, mask));
        if (v > best) {
          best = v;
          arg = mask;
        }
      }
    }
    std::size_t interior_arg = interior.size();
    Vec t(x.size());
    for (std::size_t j = 0; j < interior.size(); ++j) {
      for (std::size_t k = 0; k < x.size(); ++k) t[k] = interior[j][k] * x[k];
      const double v = norm(t);
      if (v > best) {
        best = v;
        interior_arg = j;
      }
    }
    r.ratio = best / den;
    if (keep) {
      if (interior_arg < interior.size()) {
        r.from_sign = false;
        r.image.resize(x.size());
        for (std::size_t k = 0; k < x.size(); ++k) r.image[k] = interior[interior_arg][k] * x[k];
      } else {
        r.image = apply_flip_mask(x, support, arg);
      }
    }
    return r;
  }
};

// ---- monotone pairs -------------------------------------------------------

struct MonotoneInner {
  const NormOracle& norm;
  std::uint64_t seed;
  std::vector<Vec> scalings;  // u in [0,1]^n

  struct Result {
    double ratio = kNaN;
    Vec f;
    Vec g;
  };

  Result eval(std::span<const double> x, bool keep) const {
    Result r;
    Vec g(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) g[k] = std::abs(x[k]);
    const auto support = support_of(g);
    if (support.empty()) return r;
    const double den = norm(g);
    if (!(den > 0.0) || !std::isfinite(den)) return r;
    const std::size_t m = support.size();
    double best = -std::numeric_limits<double>::infinity();
    Vec arg;
    if (m <= kExhaustiveVertices) {
      auto scan = scan_masks(norm, g, support, m, Toggle::kZero, false);
      best = scan.best;
      if (keep) arg = apply_zero_mask(g, support, scan.mask);
    } else {
      for (std::uint64_t mask : pattern_masks(seed, m)) {
        Vec f = apply_zero_mask(g, support, mask);
        const double v = norm(f);
        if (v > best) {
          best = v;
          if (keep) arg = std::move(f);
        }
      }
    }
    Vec f(x.size());
    for (const auto& u : scalings) {
      for (std::size_t k = 0; k < x.size(); ++k) f[k] = u[k] * g[k];
      const double v = norm(f);
      if (v > best) {
        best = v;
        if (keep) arg = f;
      }
    }
    r.ratio = best / den;
    if (keep) {
      r.f = std::move(arg);
      r.g = std::move(g);
    }
    return r;
  }
};

bool lattice_exact(const NormOracle& norm, double value) {
  return is_closed_form_lattice(*norm.spec()) && !norm.lower_bound_only() &&
         std::abs(value - 1.0) <= 1e-12;
}

void require_found(const SearchOutcome& out, const char* name) {
  if (!out.found) {
    throw DegenerateNormError(std::string(name) +
                              ": no candidate produced a finite ratio (degenerate norm)");
  }
}

SearchSpace function_space(std::size_t n, const CertifyOptions& opt, bool nonneg) {
  SearchSpace space;
  space.dim = n;
  space.fixed = nonneg ? nonnegative_probes(n) : function_probes(n);
  append_warm(space.fixed, opt.warm_starts, n, nonneg);
  if (nonneg) {
    space.draw = [n](std::mt19937_64& rng) {
      auto v = random_unit(rng, n);
      for (double& x : v) x = std::abs(x);
      return v;
    };
  } else {
    space.draw = [n](std::mt19937_64& rng) { return random_unit(rng, n); };
  }
  return space;
}

ConstantEstimate sign_search(const NormOracle& norm, const CertifyOptions& opt,
                             bool with_interior, const char* name) {
  const std::size_t n = norm.dim();
  SignInner inner{norm, opt.seed, {}};
  if (with_interior) inner.interior = fixed_multipliers(opt.seed, kSignStream, n, -1.0);
  auto space = function_space(n, opt, false);
  auto out = maximize(space, [&](std::span<const double> x) { return inner.eval(x, false).ratio; },
                      search_options(norm, opt, kSignStream));
  require_found(out, name);
  auto r = inner.eval(out.x, true);
  ConstantEstimate e;
  e.name = name;
  e.value = r.ratio;
  e.evaluations = out.evaluations;
  e.inner_exhaustive = n <= kExhaustiveSets;
  e.exact = lattice_exact(norm, e.value);
  if (with_interior) {
    e.witness = Witness{WitnessKind::kPair, Func(r.image), Func(out.x), std::nullopt, std::nullopt};
  } else {
    Vec eps(n, 1.0);
    for (std::size_t k = 0; k < n; ++k) {
      if (out.x[k] != 0.0 && r.image[k] != out.x[k]) eps[k] = -1.0;
    }
    e.witness = Witness{WitnessKind::kSignFlip, Func(out.x), Func(eps), std::nullopt, std::nullopt};
  }
  return e;
}

}  // namespace

double replay(const NormOracle& norm, const Witness& w) {
  switch (w.kind) {
    case WitnessKind::kRestriction:
      return norm(restrict(w.f, w.set.value())) / norm(w.f);
    case WitnessKind::kSignFlip:
      return norm(hadamard(w.g.value(), w.f)) / norm(w.f);
    case WitnessKind::kPair:
      return norm(w.f) / norm(w.g.value());
    case WitnessKind::kModulusPair:
      return norm(abs(w.f) - abs(w.g.value())) / norm(w.f - w.g.value());
    case WitnessKind::kCoordinate:
      return std::abs(w.f[w.atom.value()]) / norm(w.f);
  }
  return kNaN;
}

ConstantEstimate restriction_constant(const NormOracle& norm, const CertifyOptions& opt) {
  const std::size_t n = norm.dim();
  RestrictionInner inner{norm, opt.seed};
  auto space = function_space(n, opt, false);
  auto out = maximize(space, [&](std::span<const double> x) { return inner.eval(x, false).ratio; },
                      search_options(norm, opt, kRestrictionStream));
  require_found(out, "restriction_constant");
  auto r = inner.eval(out.x, true);
  ConstantEstimate e;
  e.name = "restriction";
  e.value = r.ratio;
  AtomSet set(n);
  for (std::size_t k = 0; k < n; ++k) {
    if (r.restricted[k] != 0.0) set.insert(k);
  }
  e.witness = Witness{WitnessKind::kRestriction, Func(out.x), std::nullopt, set, std::nullopt};
  e.evaluations = out.evaluations;
  e.inner_exhaustive = n <= kExhaustiveSets;
  e.exact = lattice_exact(norm, e.value);
  return e;
}

ConstantEstimate monotonicity_constant(const NormOracle& norm, const CertifyOptions& opt) {
  const std::size_t n = norm.dim();
  MonotoneInner inner{norm, opt.seed, fixed_multipliers(opt.seed, kMonotoneStream, n, 0.0)};
  auto space = function_space(n, opt, true);
  auto out = maximize(space, [&](std::span<const double> x) { return inner.eval(x, false).ratio; },
                      search_options(norm, opt, kMonotoneStream));
  require_found(out, "monotonicity_constant");
  auto r = inner.eval(out.x, true);
  ConstantEstimate e;
  e.name = "monotonicity";
  e.value = r.ratio;
  e.witness = Witness{WitnessKind::kPair, Func(r.f), Func(r.g), std::nullopt, std::nullopt};
  e.evaluations = out.evaluations;
  e.inner_exhaustive = n <= kExhaustiveVertices;
  e.exact = lattice_exact(norm, e.value);
  return e;
}

ConstantEstimate ideal_constant(const NormOracle& norm, const CertifyOptions& opt) {
  return sign_search(norm, opt, true, "ideal");
}

ConstantEstimate unconditional_constant(const NormOracle& norm, const CertifyOptions& opt) {
  return sign_search(norm, opt, false, "unconditional");
}

std::optional<RieszViolation> riesz_from_ideal(const ConstantEstimate& ideal) {
  if (!(ideal.value > 1.0 + kViolationSlack)) return std::nullopt;
  return RieszViolation{ideal.value, ideal.witness.f, ideal.witness.g.value()};
}

std::optional<RieszViolation> riesz_violation(const NormOracle& norm, const CertifyOptions& opt) {
  return riesz_from_ideal(ideal_constant(norm, opt));
}

ConstantEstimate abs_lipschitz(const NormOracle& norm, const CertifyOptions& opt) {
  const std::size_t n = norm.dim();
  SearchSpace space;
  space.dim = 2 * n;
  {
    // (chi_A - chi_B, -chi_B) over singletons and leading intervals, then
    // each probe against zero.
    std::vector<Vec> sets;
    for (std::size_t k = 0; k < n; ++k) {
      Vec e(n, 0.0);
      e[k] = 1.0;
      sets.push_back(std::move(e));
    }
    for (std::size_t k = 2; k <= n; ++k) {
      Vec pre(n, 0.0);
      for (std::size_t i = 0; i < k; ++i) pre[i] = 1.0;
      sets.push_back(std::move(pre));
    }
    for (const auto& a : sets) {
      for (const auto& b : sets) {
        Vec x(2 * n);
        for (std::size_t k = 0; k < n; ++k) {
          x[k] = a[k] - b[k];
          x[n + k] = -b[k];
        }
        space.fixed.push_back(std::move(x));
      }
    }
    for (const auto& p : function_probes(n)) {
      Vec x(2 * n, 0.0);
      std::copy(p.begin(), p.end(), x.begin());
      space.fixed.push_back(std::move(x));
    }
  }
  space.draw = [n](std::mt19937_64& rng) { return random_unit(rng, 2 * n); };

  auto objective = [&](std::span<const double> x) {
    Vec num(n);
    Vec den(n);
    bool distinct = false;
    for (std::size_t k = 0; k < n; ++k) {
      num[k] = std::abs(x[k]) - std::abs(x[n + k]);
      den[k] = x[k] - x[n + k];
      distinct = distinct || den[k] != 0.0;
    }
    if (!distinct) return kNaN;
    const double d = norm(den);
    if (!(d > 0.0) || !std::isfinite(d)) return kNaN;
    return norm(num) / d;
  };
  auto out = maximize(space, objective, search_options(norm, opt, kLipschitzStream));
  require_found(out, "abs_lipschitz");
  ConstantEstimate e;
  e.name = "abs_lipschitz";
  Vec g(out.x.begin(), out.x.begin() + static_cast<std::ptrdiff_t>(n));
  Vec h(out.x.begin() + static_cast<std::ptrdiff_t>(n), out.x.end());
  e.witness = Witness{WitnessKind::kModulusPair, Func(g), Func(h), std::nullopt, std::nullopt};
  e.value = out.value;
  e.evaluations = out.evaluations;
  e.exact = lattice_exact(norm, e.value);
  return e;
}

MultiplierReport multiplier_check(const NormOracle& norm, const CertifyOptions& opt,
                                  bool strictly_rectangular) {
  const std::size_t n = norm.dim();
  MultiplierReport rep;
  rep.asserted = strictly_rectangular;

  auto probes = function_probes(n);
  if (probes.size() > 64) probes.resize(64);
  const std::size_t n_fixed = probes.size() * probes.size();
  const std::size_t total = n_fixed + opt.budget.random;
  rep.pairs = total;

  auto make_pair = [&](std::size_t i) {
    if (i < n_fixed) return std::make_pair(probes[i / probes.size()], probes[i % probes.size()]);
    auto rng = stream_for(opt.seed, kMultiplierStream, i - n_fixed);
    Vec s(n);
    for (double& v : s) v = uniform(rng, -1.0, 1.0);
    return std::make_pair(std::move(s), random_unit(rng, n));
  };

  std::vector<double> product(total, kNaN);
  auto modulus = parallel_map(
      total,
      [&](std::size_t i) {
        auto [s, g] = make_pair(i);
        const double s_inf = sup_abs(s);
        if (s_inf == 0.0 || sup_abs(g) == 0.0) return kNaN;
        Vec sg(n);
        Vec abs_sg(n);
        Vec abs_g(n);
        for (std::size_t k = 0; k < n; ++k) {
          sg[k] = s[k] * g[k];
          abs_sg[k] = std::abs(sg[k]);
          abs_g[k] = std::abs(g[k]);
        }
        product[i] = norm(sg) / (s_inf * norm(g));
        return norm(abs_sg) / (s_inf * norm(abs_g));
      },
      opt.exec);

  Best best_mod;
  Best best_prod;
  for (std::size_t i = 0; i < total; ++i) {
    if (std::isfinite(modulus[i])) {
      best_mod = combine(best_mod, Best{modulus[i], i});
      if (modulus[i] > 1.0 + kViolationSlack) ++rep.modulus_violations;
    }
    if (std::isfinite(product[i])) {
      best_prod = combine(best_prod, Best{product[i], i});
      if (product[i] > 4.0 * (1.0 + kViolationSlack)) ++rep.product_violations;
    }
  }
  if (best_mod.found()) {
    rep.max_modulus_ratio = best_mod.value;
    auto [s, g] = make_pair(best_mod.index);
    rep.modulus_witness.emplace(Func(s), Func(g));
  }
  if (best_prod.found()) {
    rep.max_product_ratio = best_prod.value;
    auto [s, g] = make_pair(best_prod.index);
    rep.product_witness.emplace(Func(s), Func(g));
  }
  return rep;
}

bool CoordinateBounds::passed() const {
  return std::all_of(holds.begin(), holds.end(), [](bool b) { return b; });
}

void audit_coordinate_bounds(CoordinateBounds& c, double restriction) {
  c.restriction = restriction;
  c.holds.assign(c.bound.size(), true);
  for (std::size_t k = 0; k < c.bound.size(); ++k) {
    c.holds[k] = c.bound[k] * c.basis_norm[k] <= restriction * (1.0 + kRelationTol);
  }
}

CoordinateBounds coordinate_bounds(const NormOracle& norm, const CertifyOptions& opt) {
  const std::size_t n = norm.dim();
  CoordinateBounds c;
  c.bound.resize(n);
  c.basis_norm.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    c.basis_norm[k] = norm(Func::basis(n, k));
    if (!(c.basis_norm[k] > 0.0)) {
      throw DegenerateNormError("||e_" + std::to_string(k) + "|| = 0 (degenerate norm)");
    }
  }
  auto space = function_space(n, opt, false);
  for (std::size_t k = 0; k < n; ++k) {
    auto objective = [&, k](std::span<const double> x) {
      const double d = norm(x);
      if (!(d > 0.0) || !std::isfinite(d)) return kNaN;
      return std::abs(x[k]) / d;
    };
    auto out = maximize(space, objective, search_options(norm, opt, kCoordinateStream + k));
    require_found(out, "coordinate_bounds");
    c.bound[k] = out.value;
    c.witness.push_back(Witness{WitnessKind::kCoordinate, Func(out.x), std::nullopt, std::nullopt, k});
  }
  return c;
}

VNormReport vnorm_equivalence_check(const NormOracle& norm, const CertifyOptions& opt,
                                    bool strictly_rectangular) {
  const std::size_t n = norm.dim();
  VNormReport rep;
  rep.asserted = strictly_rectangular;
  const auto probes = function_probes(n);
  const std::size_t total = probes.size() + opt.budget.random;
  rep.samples = total;

  auto sample = [&](std::size_t i, std::uint64_t sub) -> Vec {
    if (i < probes.size() && sub == 0) return probes[i];
    auto rng = stream_for(opt.seed, kVNormStream, 2 * i + sub);
    return random_unit(rng, n);
  };
  auto vnorm_of = [&](const Vec& f) {
    Vec a(n);
    for (std::size_t k = 0; k < n; ++k) a[k] = std::abs(f[k]);
    return norm(a);
  };

  std::vector<double> cone(total);
  std::vector<double> excess(total);
  auto ratio = parallel_map(
      total,
      [&](std::size_t i) {
        const Vec f = sample(i, 0);
        const Vec g = sample(i, 1);
        const double vf = vnorm_of(f);
        // On the positive cone the two norms must agree exactly.
        Vec af(n);
        for (std::size_t k = 0; k < n; ++k) af[k] = std::abs(f[k]);
        cone[i] = (vnorm_of(af) == norm(af)) ? 0.0 : 1.0;
        Vec sum(n);
        for (std::size_t k = 0; k < n; ++k) sum[k] = f[k] + g[k];
        const double rhs = vf + vnorm_of(g);
        excess[i] = (vnorm_of(sum) - rhs) / rhs;
        return vf / norm(f);
      },
      opt.exec);

  rep.min_ratio = std::numeric_limits<double>::infinity();
  rep.max_ratio = 0.0;
  rep.max_triangle_excess = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < total; ++i) {
    rep.min_ratio = std::min(rep.min_ratio, ratio[i]);
    rep.max_ratio = std::max(rep.max_ratio, ratio[i]);
    const bool bad = ratio[i] < 0.5 * (1.0 - kViolationSlack) ||
                     ratio[i] > 2.0 * (1.0 + kViolationSlack);
    if (bad) {
      ++rep.bound_violations;
      if (!rep.bound_witness) rep.bound_witness = Func(sample(i, 0));
    }
    if (cone[i] != 0.0) ++rep.cone_mismatches;
    if (excess[i] > rep.max_triangle_excess) rep.max_triangle_excess = excess[i];
    if (excess[i] > kViolationSlack) {
      ++rep.triangle_violations;
      if (!rep.triangle_witness) rep.triangle_witness.emplace(Func(sample(i, 0)), Func(sample(i, 1)));
    }
  }
  return rep;
}

bool RelationsAudit::passed() const { return first_failure() == nullptr; }

const RelationRow* RelationsAudit::first_failure() const {
  for (const auto& r : rows) {
    if (r.applicable && !r.holds) return &r;
  }
  return nullptr;
}

RelationsAudit relations_audit(const Estimates& est) {
  RelationsAudit audit;
  auto leq = [&](std::string name, double lhs, double rhs, bool applicable = true) {
    RelationRow row{std::move(name), lhs, rhs, applicable, true};
    if (applicable) row.holds = lhs <= rhs * (1.0 + kRelationTol);
    audit.rows.push_back(std::move(row));
  };
  const double c = est.restriction.value;
  const double ideal = est.ideal.value;
  const double k = est.unconditional.value;
  const bool strict = c <= kStrictRectangular;

  leq("restriction <= ideal", c, ideal);
  leq("unconditional <= ideal", k, ideal);
  leq("ideal <= unconditional", ideal, k);
  leq("restriction <= (1 + unconditional) / 2", c, 0.5 * (1.0 + k));
  {
    const bool none = !est.riesz.has_value();
    const bool unit = ideal <= 1.0 + kRelationTol;
    audit.rows.push_back(RelationRow{"riesz violation absent <=> ideal = 1",
                                     none ? 1.0 : 0.0, unit ? 1.0 : 0.0, true, none == unit});
  }
  {
    RelationRow row{"strictly rectangular => monotonicity = 1", est.monotonicity.value, 1.0,
                    strict, true};
    if (strict) row.holds = std::abs(est.monotonicity.value - 1.0) <= kRelationTol;
    audit.rows.push_back(std::move(row));
  }
  leq("strictly rectangular => abs_lipschitz <= 4 * monotonicity", est.abs_lipschitz.value,
      4.0 * est.monotonicity.value, strict);
  if (est.coordinates) {
    double worst = 0.0;
    double bound = 0.0;
    for (std::size_t i = 0; i < est.coordinates->bound.size(); ++i) {
      const double lhs = est.coordinates->bound[i];
      const double rhs = c / est.coordinates->basis_norm[i];
      if (i == 0 || lhs / rhs > worst / bound) {
        worst = lhs;
        bound = rhs;
      }
    }
    leq("coordinate bound |f(k)| / ||f|| <= C / ||e_k||", worst, bound);
  }
  return audit;
}

PropertyReport analyze(const NormOracle& norm, const CertifyOptions& opt, nlohmann::json config) {
  PropertyReport rep;
  rep.config = std::move(config);
  rep.warnings = norm.warnings();
  if (norm.lower_bound_only()) {
    rep.warnings.push_back("sampled rectangularization: norm values are lower bounds");
  }
  auto& est = rep.estimates;

  auto coords = coordinate_bounds(norm, opt);

  CertifyOptions with_coords = opt;
  for (const auto& w : coords.witness) with_coords.warm_starts.push_back(w.f);
  est.restriction = restriction_constant(norm, with_coords);

  CertifyOptions with_restriction = opt;
  with_restriction.warm_starts.push_back(est.restriction.witness.f);
  est.unconditional = unconditional_constant(norm, with_restriction);
  est.ideal = ideal_constant(norm, with_restriction);
  est.riesz = riesz_from_ideal(est.ideal);
  est.monotonicity = monotonicity_constant(norm, with_restriction);
  est.abs_lipschitz = abs_lipschitz(norm, opt);

  audit_coordinate_bounds(coords, est.restriction.value);
  est.coordinates = std::move(coords);

  const bool strict = rep.strictly_rectangular();
  rep.multiplier = multiplier_check(norm, opt, strict);
  rep.vnorm = vnorm_equivalence_check(norm, opt, strict);
  rep.audit = relations_audit(est);
  return rep;
}

}  // namespace latticelab
