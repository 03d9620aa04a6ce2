#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "latticelab/core.hpp"

namespace latticelab {

struct BodySpec;
using BodyPtr = std::shared_ptr<const BodySpec>;

struct BallRegion {
  double radius;
};
// a . x <= c
struct HalfspaceRegion {
  std::vector<double> a;
  double c;
};
// |a . x| <= c
struct SlabRegion {
  std::vector<double> a;
  double c;
};
// x_i * x_j >= 0 (geq) or <= 0
struct SignRegion {
  std::size_t i;
  std::size_t j;
  bool geq;
};
struct UnionRegion {
  std::vector<BodyPtr> children;
};
struct IntersectionRegion {
  std::vector<BodyPtr> children;
};

// Closed region of R^n built from primitives. Symmetry, convexity and
// absorption are not enforced here; body_diagnostics samples for them.
struct BodySpec {
  std::variant<BallRegion, HalfspaceRegion, SlabRegion, SignRegion, UnionRegion,
               IntersectionRegion>
      node;
};

namespace body {
BodyPtr ball(double radius);
BodyPtr halfspace(std::vector<double> a, double c);
BodyPtr slab(std::vector<double> a, double c);
BodyPtr sign(std::size_t i, std::size_t j, bool geq);
BodyPtr unite(std::vector<BodyPtr> children);
BodyPtr intersect(std::vector<BodyPtr> children);
// {xy >= 0, x^2 + y^2 <= 1} u {xy <= 0, |y - x| <= 1}
BodyPtr sign_split_disc();
}  // namespace body

bool contains(const BodySpec& body, std::span<const double> x);

// Dimension implied by the body's coefficient vectors and sign indices.
// Returns nullopt when only balls appear. Throws ValidationError on
// inconsistent lengths.
std::optional<std::size_t> dimension_hint(const BodySpec& body);
// Throws ValidationError if the body cannot live in R^n.
void validate(const BodySpec& body, std::size_t n);

constexpr double kDefaultGaugeTol = 1e-9;

// inf{lambda > 0 : x / lambda in body}. The ray is bracketed by doubling or
// halving lambda from 1 (capped at 2^64 either way), then bisected until the
// bracket is narrower than tol * min(1, upper end) or stops shrinking.
// tol == 0 bisects to machine precision.
double gauge(const BodySpec& body, std::span<const double> x,
             double tol = kDefaultGaugeTol);
double gauge(const BodySpec& body, const Func& x, double tol = kDefaultGaugeTol);

struct BodyDiagnostics {
  std::size_t samples = 0;
  std::size_t symmetry_violations = 0;
  std::size_t convexity_violations = 0;
  std::size_t unbounded_rays = 0;
  bool absorbing = false;
  double sample_radius = 0.0;
  std::optional<Func> symmetry_witness;
  // Two members whose midpoint lies outside.
  std::optional<std::pair<Func, Func>> convexity_witness;
  std::optional<Func> unbounded_witness;

  bool passed() const {
    return symmetry_violations == 0 && convexity_violations == 0 &&
           unbounded_rays == 0 && absorbing;
  }
};

BodyDiagnostics body_diagnostics(const BodySpec& body, std::size_t n,
                                 std::size_t samples, std::uint64_t seed);

void to_json(nlohmann::json& j, const BodySpec& body);
BodyPtr body_from_json(const nlohmann::json& j);
void to_json(nlohmann::json& j, const BodyDiagnostics& d);

}  // namespace latticelab
