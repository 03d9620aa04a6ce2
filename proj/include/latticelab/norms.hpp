#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "latticelab/body.hpp"
#include "latticelab/core.hpp"

namespace latticelab {

struct NormSpec;
using NormSpecPtr = std::shared_ptr<const NormSpec>;

constexpr double kInfinity = std::numeric_limits<double>::infinity();

// (sum_k |w_k x_k|^p)^(1/p); p = inf is the weighted max norm.
struct PNormNode {
  double p;
  std::vector<double> weights;  // empty means all ones
};

// ||f|| = inner(T^{-1} f) where f = T a maps coefficients to functions.
struct PullbackNode {
  std::vector<std::vector<double>> matrix;
  NormSpecPtr inner;
};

struct GaugeNode {
  BodyPtr body;
};

enum class RectMode { kExact, kSample };

// sup over atom subsets A of inner(chi_A f).
struct RectangularizedNode {
  NormSpecPtr inner;
  RectMode mode = RectMode::kExact;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
};

// inner(|f|)
struct VNormNode {
  NormSpecPtr inner;
};

struct ScaledNode {
  double c;
  NormSpecPtr inner;
};

struct NormSpec {
  std::variant<PNormNode, PullbackNode, GaugeNode, RectangularizedNode, VNormNode,
               ScaledNode>
      node;
};

namespace spec {
NormSpecPtr pnorm(double p, std::vector<double> weights = {});
NormSpecPtr pullback(std::vector<std::vector<double>> matrix, NormSpecPtr inner);
NormSpecPtr gauge(BodyPtr body);
NormSpecPtr rectangularized(NormSpecPtr inner);
NormSpecPtr rectangularized_sampled(NormSpecPtr inner, std::size_t samples,
                                    std::uint64_t seed);
NormSpecPtr vnorm(NormSpecPtr inner);
NormSpecPtr scaled(double c, NormSpecPtr inner);

// ||sum_k a_k v_k|| = ||(a_k / k)_k||_2 with v_k = e_1 + ... + e_k.
NormSpecPtr vbasis_pullback(std::size_t n);
// L^p(mu): weights mu_k^(1/p).
NormSpecPtr lp_of_measure(const MeasureSpace& mu, double p);
}  // namespace spec

struct CompileOptions {
  std::size_t max_depth = 8;
  // 0 bisects gauges to machine precision.
  double gauge_tol = kDefaultGaugeTol;
  std::size_t exact_rect_limit = 24;
  double ill_conditioned = 1e12;
};

namespace detail {
class NormNode;
}

// Evaluator compiled from a NormSpec for a fixed dimension. Immutable and
// safe to share across threads.
class NormOracle {
 public:
  static NormOracle compile(const NormSpecPtr& spec,
                            std::optional<std::size_t> dim = std::nullopt,
                            const CompileOptions& options = {});

  std::size_t dim() const { return dim_; }
  const NormSpecPtr& spec() const { return spec_; }
  const std::vector<std::string>& warnings() const { return warnings_; }
  // Set when a sampled rectangularization appears in the tree; values are
  // then lower bounds of the defining sup.
  bool lower_bound_only() const { return lower_bound_only_; }
  // Relative accuracy of a single evaluation: the gauge tolerance when a
  // gauge appears in the tree, otherwise 0.
  double resolution() const { return resolution_; }

  double evaluate(std::span<const double> x) const;
  double evaluate(const Func& f) const { return evaluate(f.span()); }
  double operator()(std::span<const double> x) const { return evaluate(x); }
  double operator()(const Func& f) const { return evaluate(f.span()); }

 private:
  std::shared_ptr<const detail::NormNode> root_;
  NormSpecPtr spec_;
  std::size_t dim_ = 0;
  std::vector<std::string> warnings_;
  bool lower_bound_only_ = false;
  double resolution_ = 0.0;
};

// Dimension implied by weights, matrices and bodies; nullopt if free.
std::optional<std::size_t> dimension_hint(const NormSpec& spec);
std::size_t depth(const NormSpec& spec);

// True when the spec is structurally a lattice norm (p-norms, positive
// multiples of them, and their rectangularizations / V-norms), so every
// constant certified here is exactly 1.
bool is_closed_form_lattice(const NormSpec& spec);

void to_json(nlohmann::json& j, const NormSpec& spec);
NormSpecPtr norm_spec_from_json(const nlohmann::json& j);
// Parses text; syntax errors become ParseError.
NormSpecPtr norm_spec_from_string(const std::string& text);

}  // namespace latticelab
