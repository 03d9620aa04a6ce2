#include "latticelab/norms.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>

#include <Eigen/Dense>

#include "latticelab/random.hpp"

namespace latticelab {

namespace spec {

NormSpecPtr pnorm(double p, std::vector<double> weights) {
  return std::make_shared<const NormSpec>(NormSpec{PNormNode{p, std::move(weights)}});
}

NormSpecPtr pullback(std::vector<std::vector<double>> matrix, NormSpecPtr inner) {
  return std::make_shared<const NormSpec>(
      NormSpec{PullbackNode{std::move(matrix), std::move(inner)}});
}

NormSpecPtr gauge(BodyPtr body) {
  return std::make_shared<const NormSpec>(NormSpec{GaugeNode{std::move(body)}});
}

NormSpecPtr rectangularized(NormSpecPtr inner) {
  return std::make_shared<const NormSpec>(
      NormSpec{RectangularizedNode{std::move(inner), RectMode::kExact, 0, 0}});
}

NormSpecPtr rectangularized_sampled(NormSpecPtr inner, std::size_t samples,
                                    std::uint64_t seed) {
  return std::make_shared<const NormSpec>(
      NormSpec{RectangularizedNode{std::move(inner), RectMode::kSample, samples, seed}});
}

NormSpecPtr vnorm(NormSpecPtr inner) {
  return std::make_shared<const NormSpec>(NormSpec{VNormNode{std::move(inner)}});
}

NormSpecPtr scaled(double c, NormSpecPtr inner) {
  return std::make_shared<const NormSpec>(NormSpec{ScaledNode{c, std::move(inner)}});
}

NormSpecPtr vbasis_pullback(std::size_t n) {
  std::vector<std::vector<double>> t(n, std::vector<double>(n, 0.0));
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = i; k < n; ++k) t[i][k] = 1.0;
    w[i] = 1.0 / static_cast<double>(i + 1);
  }
  return pullback(std::move(t), pnorm(2.0, std::move(w)));
}

NormSpecPtr lp_of_measure(const MeasureSpace& mu, double p) {
  std::vector<double> w(mu.size(), 1.0);
  if (!std::isinf(p)) {
    for (std::size_t k = 0; k < w.size(); ++k) w[k] = std::pow(mu.weights()[k], 1.0 / p);
  }
  return pnorm(p, std::move(w));
}

}  // namespace spec

namespace detail {

class NormNode {
 public:
  virtual ~NormNode() = default;
  virtual double evaluate(std::span<const double> x) const = 0;
};

}  // namespace detail

namespace {

using detail::NormNode;
using NodePtr = std::shared_ptr<const NormNode>;

class PNorm final : public NormNode {
 public:
  PNorm(double p, std::vector<double> w) : p_(p), w_(std::move(w)) {}

  double evaluate(std::span<const double> x) const override {
    double m = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) m = std::max(m, std::abs(weight(k) * x[k]));
    if (std::isinf(p_) || m == 0.0) return m;
    double s = 0.0;
    if (p_ == 1.0) {
      for (std::size_t k = 0; k < x.size(); ++k) s += std::abs(weight(k) * x[k]);
      return s;
    }
    if (p_ == 2.0) {
      for (std::size_t k = 0; k < x.size(); ++k) {
        const double t = weight(k) * x[k] / m;
        s += t * t;
      }
      return m * std::sqrt(s);
    }
    for (std::size_t k = 0; k < x.size(); ++k) {
      s += std::pow(std::abs(weight(k) * x[k]) / m, p_);
    }
    return m * std::pow(s, 1.0 / p_);
  }

 private:
  double weight(std::size_t k) const { return w_.empty() ? 1.0 : w_[k]; }
  double p_;
  std::vector<double> w_;
};

class Pullback final : public NormNode {
 public:
  Pullback(Eigen::PartialPivLU<Eigen::MatrixXd> lu, NodePtr inner)
      : lu_(std::move(lu)), inner_(std::move(inner)) {}

  double evaluate(std::span<const double> x) const override {
    Eigen::Map<const Eigen::VectorXd> f(x.data(), static_cast<Eigen::Index>(x.size()));
    const Eigen::VectorXd a = lu_.solve(f);
    return inner_->evaluate(std::span<const double>(a.data(), x.size()));
  }

 private:
  Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
  NodePtr inner_;
};

class Gauge final : public NormNode {
 public:
  Gauge(BodyPtr body, double tol) : body_(std::move(body)), tol_(tol) {}
  double evaluate(std::span<const double> x) const override {
    return gauge(*body_, x, tol_);
  }

 private:
  BodyPtr body_;
  double tol_;
};

class Rectangularized final : public NormNode {
 public:
  Rectangularized(NodePtr inner, RectMode mode, std::size_t samples, std::uint64_t seed)
      : inner_(std::move(inner)), mode_(mode), samples_(samples), seed_(seed) {}

  double evaluate(std::span<const double> x) const override {
    std::vector<std::size_t> support;
    for (std::size_t k = 0; k < x.size(); ++k) {
      if (x[k] != 0.0) support.push_back(k);
    }
    if (support.empty()) return 0.0;
    std::vector<double> y(x.size(), 0.0);
    double best = 0.0;
    auto try_mask = [&](std::uint64_t mask) {
      for (std::size_t b = 0; b < support.size(); ++b) {
        y[support[b]] = ((mask >> b) & 1u) ? x[support[b]] : 0.0;
      }
      best = std::max(best, inner_->evaluate(y));
    };
    const std::size_t m = support.size();
    const std::uint64_t full = (m == 64) ? ~std::uint64_t{0} : (std::uint64_t{1} << m) - 1;
    if (mode_ == RectMode::kExact) {
      for (std::uint64_t mask = 1; mask <= full && mask != 0; ++mask) {
        try_mask(mask);
        if (mask == full) break;
      }
      return best;
    }
    try_mask(full);
    for (std::size_t b = 0; b < m; ++b) {
      try_mask(std::uint64_t{1} << b);
      try_mask(full & ~(std::uint64_t{1} << b));
    }
    auto rng = stream_for(seed_, 0x5ec7, m);
    for (std::size_t s = 0; s < samples_; ++s) try_mask(rng() & full);
    return best;
  }

 private:
  NodePtr inner_;
  RectMode mode_;
  std::size_t samples_;
  std::uint64_t seed_;
};

class VNorm final : public NormNode {
 public:
  explicit VNorm(NodePtr inner) : inner_(std::move(inner)) {}
  double evaluate(std::span<const double> x) const override {
    std::vector<double> a(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) a[k] = std::abs(x[k]);
    return inner_->evaluate(a);
  }

 private:
  NodePtr inner_;
};

class Scaled final : public NormNode {
 public:
  Scaled(double c, NodePtr inner) : c_(c), inner_(std::move(inner)) {}
  double evaluate(std::span<const double> x) const override {
    return c_ * inner_->evaluate(x);
  }

 private:
  double c_;
  NodePtr inner_;
};

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void merge_hint(std::optional<std::size_t>& hint, std::size_t n) {
  if (hint && *hint != n) {
    throw ValidationError("norm spec disagrees on dimension (" + std::to_string(*hint) +
                          " vs " + std::to_string(n) + ")");
  }
  hint = n;
}

const NormSpec& child(const NormSpecPtr& p) {
  if (!p) throw ValidationError("norm spec has a missing inner norm");
  return *p;
}

struct Builder {
  std::size_t n;
  const CompileOptions& options;
  std::vector<std::string>& warnings;
  bool& lower_bound_only;
  double& resolution;

  NodePtr build(const NormSpec& s) {
    return std::visit(
        Overloaded{
            [&](const PNormNode& v) -> NodePtr {
              if (std::isnan(v.p) || v.p < 1.0) {
                throw ValidationError("p must lie in [1, inf]");
              }
              if (!v.weights.empty()) {
                if (v.weights.size() != n) throw ValidationError("p-norm weights length != dimension");
                for (double w : v.weights) {
                  if (!std::isfinite(w) || w <= 0.0) {
                    throw ValidationError("p-norm weights must be finite and positive");
                  }
                }
              }
              return std::make_shared<PNorm>(v.p, v.weights);
            },
            [&](const PullbackNode& v) -> NodePtr {
              if (v.matrix.size() != n) throw ValidationError("pullback matrix must be n x n");
              Eigen::MatrixXd t(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
              for (std::size_t i = 0; i < n; ++i) {
                if (v.matrix[i].size() != n) throw ValidationError("pullback matrix must be n x n");
                for (std::size_t k = 0; k < n; ++k) {
                  if (!std::isfinite(v.matrix[i][k])) {
                    throw ValidationError("pullback matrix entries must be finite");
                  }
                  t(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = v.matrix[i][k];
                }
              }
              Eigen::PartialPivLU<Eigen::MatrixXd> lu(t);
              const Eigen::VectorXd diag = lu.matrixLU().diagonal();
              if ((diag.array() == 0.0).any()) {
                throw ValidationError("pullback matrix is singular");
              }
              const double rcond = lu.rcond();
              if (!(rcond > 0.0)) throw ValidationError("pullback matrix is singular");
              if (1.0 / rcond > options.ill_conditioned) {
                std::ostringstream os;
                os << "pullback matrix is ill-conditioned (condition estimate "
                   << 1.0 / rcond << ")";
                warnings.push_back(os.str());
              }
              return std::make_shared<Pullback>(std::move(lu), build(child(v.inner)));
            },
            [&](const GaugeNode& v) -> NodePtr {
              if (!v.body) throw ValidationError("gauge norm has no body");
              validate(*v.body, n);
              resolution = std::max(resolution, options.gauge_tol);
              return std::make_shared<Gauge>(v.body, options.gauge_tol);
            },
            [&](const RectangularizedNode& v) -> NodePtr {
              if (v.mode == RectMode::kExact && n > options.exact_rect_limit) {
                throw ValidationError(
                    "rectangularization is exhaustive up to " +
                    std::to_string(options.exact_rect_limit) +
                    " atoms; request sampling mode explicitly for n = " + std::to_string(n));
              }
              if (n > 64) throw ValidationError("rectangularization supports at most 64 atoms");
              if (v.mode == RectMode::kSample) lower_bound_only = true;
              return std::make_shared<Rectangularized>(build(child(v.inner)), v.mode,
                                                       v.samples, v.seed);
            },
            [&](const VNormNode& v) -> NodePtr {
              return std::make_shared<VNorm>(build(child(v.inner)));
            },
            [&](const ScaledNode& v) -> NodePtr {
              if (!std::isfinite(v.c) || v.c <= 0.0) {
                throw ValidationError("scale factor must be positive and finite");
              }
              return std::make_shared<Scaled>(v.c, build(child(v.inner)));
            }},
        s.node);
  }
};

}  // namespace

std::optional<std::size_t> dimension_hint(const NormSpec& s) {
  std::optional<std::size_t> hint;
  std::visit(Overloaded{[&](const PNormNode& v) {
                          if (!v.weights.empty()) merge_hint(hint, v.weights.size());
                        },
                        [&](const PullbackNode& v) {
                          merge_hint(hint, v.matrix.size());
                          if (auto h = dimension_hint(child(v.inner))) merge_hint(hint, *h);
                        },
                        [&](const GaugeNode& v) {
                          if (v.body) {
                            if (auto h = latticelab::dimension_hint(*v.body)) merge_hint(hint, *h);
                          }
                        },
                        [&](const auto& v) {
                          if (auto h = dimension_hint(child(v.inner))) merge_hint(hint, *h);
                        }},
             s.node);
  return hint;
}

std::size_t depth(const NormSpec& s) {
  return std::visit(Overloaded{[](const PNormNode&) -> std::size_t { return 1; },
                               [](const GaugeNode&) -> std::size_t { return 1; },
                               [](const auto& v) -> std::size_t {
                                 return 1 + depth(child(v.inner));
                               }},
                    s.node);
}

bool is_closed_form_lattice(const NormSpec& s) {
  return std::visit(Overloaded{[](const PNormNode&) { return true; },
                               [](const ScaledNode& v) { return is_closed_form_lattice(child(v.inner)); },
                               [](const VNormNode& v) { return is_closed_form_lattice(child(v.inner)); },
                               [](const RectangularizedNode& v) {
                                 return v.mode == RectMode::kExact &&
                                        is_closed_form_lattice(child(v.inner));
                               },
                               [](const auto&) { return false; }},
                    s.node);
}

NormOracle NormOracle::compile(const NormSpecPtr& s, std::optional<std::size_t> dim,
                               const CompileOptions& options) {
  if (!s) throw ValidationError("null norm spec");
  const auto hint = dimension_hint(*s);
  if (dim && hint && *dim != *hint) {
    throw ValidationError("requested dimension " + std::to_string(*dim) +
                          " conflicts with spec dimension " + std::to_string(*hint));
  }
  if (!dim && !hint) {
    throw ValidationError("dimension is not determined by the spec; supply one");
  }
  const std::size_t n = dim ? *dim : *hint;
  if (n == 0) throw ValidationError("dimension must be positive");
  if (depth(*s) > options.max_depth) {
    throw ValidationError("norm spec nesting exceeds depth " + std::to_string(options.max_depth));
  }
  NormOracle out;
  out.spec_ = s;
  out.dim_ = n;
  Builder b{n, options, out.warnings_, out.lower_bound_only_, out.resolution_};
  out.root_ = b.build(*s);
  return out;
}

double NormOracle::evaluate(std::span<const double> x) const {
  if (x.size() != dim_) {
    throw DimensionError("norm of dimension " + std::to_string(dim_) +
                         " evaluated on vector of length " + std::to_string(x.size()));
  }
  return root_->evaluate(x);
}

}  // namespace latticelab
