#include "latticelab/body.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "latticelab/random.hpp"

namespace latticelab {

namespace body {

BodyPtr ball(double radius) {
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    throw ValidationError("ball radius must be positive and finite");
  }
  return std::make_shared<const BodySpec>(BodySpec{BallRegion{radius}});
}

BodyPtr halfspace(std::vector<double> a, double c) {
  if (a.empty()) throw ValidationError("halfspace needs a nonempty normal");
  return std::make_shared<const BodySpec>(BodySpec{HalfspaceRegion{std::move(a), c}});
}

BodyPtr slab(std::vector<double> a, double c) {
  if (a.empty()) throw ValidationError("slab needs a nonempty normal");
  if (!(c >= 0.0)) throw ValidationError("slab half-width must be non-negative");
  return std::make_shared<const BodySpec>(BodySpec{SlabRegion{std::move(a), c}});
}

BodyPtr sign(std::size_t i, std::size_t j, bool geq) {
  return std::make_shared<const BodySpec>(BodySpec{SignRegion{i, j, geq}});
}

BodyPtr unite(std::vector<BodyPtr> children) {
  if (children.empty()) throw ValidationError("union needs at least one child");
  return std::make_shared<const BodySpec>(BodySpec{UnionRegion{std::move(children)}});
}

BodyPtr intersect(std::vector<BodyPtr> children) {
  if (children.empty()) throw ValidationError("intersection needs at least one child");
  return std::make_shared<const BodySpec>(
      BodySpec{IntersectionRegion{std::move(children)}});
}

BodyPtr sign_split_disc() {
  return unite({intersect({sign(0, 1, true), ball(1.0)}),
                intersect({sign(0, 1, false), slab({-1.0, 1.0}, 1.0)})});
}

}  // namespace body

namespace {

double dot(const std::vector<double>& a, std::span<const double> x) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * x[k];
  return s;
}

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void merge_hint(std::optional<std::size_t>& hint, std::size_t n) {
  if (hint && *hint != n) {
    throw ValidationError("body primitives disagree on dimension (" +
                          std::to_string(*hint) + " vs " + std::to_string(n) + ")");
  }
  hint = n;
}

}  // namespace

bool contains(const BodySpec& b, std::span<const double> x) {
  return std::visit(
      Overloaded{
          [&](const BallRegion& r) {
            double s = 0.0;
            for (double v : x) s += v * v;
            return s <= r.radius * r.radius;
          },
          [&](const HalfspaceRegion& r) { return dot(r.a, x) <= r.c; },
          [&](const SlabRegion& r) { return std::abs(dot(r.a, x)) <= r.c; },
          [&](const SignRegion& r) {
            const double p = x[r.i] * x[r.j];
            return r.geq ? p >= 0.0 : p <= 0.0;
          },
          [&](const UnionRegion& r) {
            return std::any_of(r.children.begin(), r.children.end(),
                               [&](const BodyPtr& c) { return contains(*c, x); });
          },
          [&](const IntersectionRegion& r) {
            return std::all_of(r.children.begin(), r.children.end(),
                               [&](const BodyPtr& c) { return contains(*c, x); });
          }},
      b.node);
}

std::optional<std::size_t> dimension_hint(const BodySpec& b) {
  std::optional<std::size_t> hint;
  std::visit(Overloaded{[&](const BallRegion&) {},
                        [&](const HalfspaceRegion& r) { merge_hint(hint, r.a.size()); },
                        [&](const SlabRegion& r) { merge_hint(hint, r.a.size()); },
                        [&](const SignRegion&) {},
                        [&](const UnionRegion& r) {
                          for (const auto& c : r.children) {
                            if (auto h = dimension_hint(*c)) merge_hint(hint, *h);
                          }
                        },
                        [&](const IntersectionRegion& r) {
                          for (const auto& c : r.children) {
                            if (auto h = dimension_hint(*c)) merge_hint(hint, *h);
                          }
                        }},
             b.node);
  return hint;
}

void validate(const BodySpec& b, std::size_t n) {
  if (auto h = dimension_hint(b); h && *h != n) {
    throw ValidationError("body has dimension " + std::to_string(*h) +
                          ", expected " + std::to_string(n));
  }
  std::visit(Overloaded{[&](const SignRegion& r) {
                          if (r.i >= n || r.j >= n) {
                            throw ValidationError("sign region index out of range");
                          }
                        },
                        [&](const UnionRegion& r) {
                          for (const auto& c : r.children) validate(*c, n);
                        },
                        [&](const IntersectionRegion& r) {
                          for (const auto& c : r.children) validate(*c, n);
                        },
                        [](const auto&) {}},
             b.node);
}

double gauge(const BodySpec& b, std::span<const double> x, double tol) {
  if (!(tol >= 0.0)) throw ValidationError("gauge tolerance must be non-negative");
  if (std::all_of(x.begin(), x.end(), [](double v) { return v == 0.0; })) return 0.0;

  std::vector<double> y(x.size());
  auto inside = [&](double lambda) {
    for (std::size_t k = 0; k < x.size(); ++k) y[k] = x[k] / lambda;
    return contains(b, y);
  };

  constexpr double kCap = 0x1.0p64;
  double lo = 0.0;
  double hi = 0.0;
  double lambda = 1.0;
  if (inside(lambda)) {
    hi = lambda;
    for (;;) {
      lambda *= 0.5;
      if (lambda < 1.0 / kCap) throw GaugeError("unbounded direction");
      if (!inside(lambda)) break;
      hi = lambda;
    }
    lo = lambda;
  } else {
    lo = lambda;
    for (;;) {
      lambda *= 2.0;
      if (lambda > kCap) throw GaugeError("not absorbing: ray never enters the body");
      if (inside(lambda)) break;
      lo = lambda;
    }
    hi = lambda;
  }

  for (int iter = 0; iter < 4096; ++iter) {
    if (hi - lo <= tol * std::min(1.0, hi)) break;
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (inside(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double gauge(const BodySpec& b, const Func& x, double tol) {
  return gauge(b, x.span(), tol);
}

BodyDiagnostics body_diagnostics(const BodySpec& b, std::size_t n,
                                 std::size_t samples, std::uint64_t seed) {
  validate(b, n);
  BodyDiagnostics d;
  d.samples = samples;

  constexpr double kProbe = 1e-6;
  d.absorbing = true;
  std::vector<double> p(n);
  auto probe = [&](const std::vector<double>& dir) {
    for (std::size_t k = 0; k < n; ++k) p[k] = kProbe * dir[k];
    if (!contains(b, p)) d.absorbing = false;
  };
  for (std::size_t k = 0; k < n; ++k) {
    std::vector<double> e(n, 0.0);
    e[k] = 1.0;
    probe(e);
    e[k] = -1.0;
    probe(e);
  }
  {
    auto rng = stream_for(seed, 1);
    for (int i = 0; i < 64; ++i) probe(random_unit(rng, n));
  }

  const std::size_t rays = std::max<std::size_t>(1, std::min<std::size_t>(samples, 1000));
  double radius = 0.0;
  bool radius_known = true;
  {
    auto rng = stream_for(seed, 2);
    for (std::size_t i = 0; i < rays; ++i) {
      auto u = random_unit(rng, n);
      std::vector<double> far(n);
      for (std::size_t k = 0; k < n; ++k) far[k] = 0x1.0p64 * u[k];
      if (contains(b, far)) {
        ++d.unbounded_rays;
        if (!d.unbounded_witness) d.unbounded_witness = Func(u);
        radius_known = false;
        continue;
      }
      try {
        radius = std::max(radius, 1.0 / gauge(b, u, 1e-6));
      } catch (const GaugeError&) {
        radius_known = false;
      }
    }
  }
  d.sample_radius = (radius_known && radius > 0.0) ? 1.25 * radius : 4.0;
  const double r = d.sample_radius;

  std::vector<std::vector<double>> members;
  {
    auto rng = stream_for(seed, 3);
    std::vector<double> x(n);
    std::vector<double> neg(n);
    for (std::size_t i = 0; i < samples; ++i) {
      for (std::size_t k = 0; k < n; ++k) {
        x[k] = uniform(rng, -r, r);
        neg[k] = -x[k];
      }
      const bool in = contains(b, x);
      if (in != contains(b, neg)) {
        ++d.symmetry_violations;
        if (!d.symmetry_witness) d.symmetry_witness = Func(in ? x : neg);
      }
      if (in && members.size() < 4096) members.push_back(x);
    }
  }

  if (members.size() >= 2) {
    auto rng = stream_for(seed, 4);
    std::vector<double> mid(n);
    for (std::size_t i = 0; i < samples; ++i) {
      const auto& u = members[rng() % members.size()];
      const auto& v = members[rng() % members.size()];
      for (std::size_t k = 0; k < n; ++k) mid[k] = 0.5 * (u[k] + v[k]);
      if (!contains(b, mid)) {
        ++d.convexity_violations;
        if (!d.convexity_witness) d.convexity_witness.emplace(Func(u), Func(v));
      }
    }
  }
  return d;
}

void to_json(nlohmann::json& j, const BodySpec& b) {
  std::visit(
      Overloaded{
          [&](const BallRegion& r) { j = {{"prim", "ball"}, {"r", r.radius}}; },
          [&](const HalfspaceRegion& r) {
            j = {{"prim", "halfspace"}, {"a", r.a}, {"c", r.c}};
          },
          [&](const SlabRegion& r) { j = {{"prim", "slab"}, {"a", r.a}, {"c", r.c}}; },
          [&](const SignRegion& r) {
            j = {{"prim", "sign"}, {"i", r.i}, {"j", r.j}, {"rel", r.geq ? "geq" : "leq"}};
          },
          [&](const UnionRegion& r) {
            auto children = nlohmann::json::array();
            for (const auto& c : r.children) children.push_back(*c);
            j = {{"op", "union"}, {"children", std::move(children)}};
          },
          [&](const IntersectionRegion& r) {
            auto children = nlohmann::json::array();
            for (const auto& c : r.children) children.push_back(*c);
            j = {{"op", "intersection"}, {"children", std::move(children)}};
          }},
      b.node);
}

namespace {

double number_field(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number()) {
    throw ParseError(std::string("body field '") + key + "' must be a number");
  }
  return j[key].get<double>();
}

std::size_t index_field(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number_unsigned()) {
    throw ParseError(std::string("body field '") + key + "' must be a non-negative integer");
  }
  return j[key].get<std::size_t>();
}

std::vector<double> vector_field(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_array()) {
    throw ParseError(std::string("body field '") + key + "' must be an array");
  }
  std::vector<double> v;
  for (const auto& e : j[key]) {
    if (!e.is_number()) throw ParseError(std::string("body field '") + key + "' must hold numbers");
    v.push_back(e.get<double>());
  }
  return v;
}

}  // namespace

BodyPtr body_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ParseError("body must be a JSON object");
  if (j.contains("op")) {
    if (!j["op"].is_string()) throw ParseError("body 'op' must be a string");
    const auto op = j["op"].get<std::string>();
    if (!j.contains("children") || !j["children"].is_array()) {
      throw ParseError("body '" + op + "' needs a 'children' array");
    }
    std::vector<BodyPtr> children;
    for (const auto& c : j["children"]) children.push_back(body_from_json(c));
    if (op == "union") return body::unite(std::move(children));
    if (op == "intersection") return body::intersect(std::move(children));
    throw ParseError("unknown body op '" + op + "'");
  }
  if (!j.contains("prim") || !j["prim"].is_string()) {
    throw ParseError("body needs 'op' or 'prim'");
  }
  const auto prim = j["prim"].get<std::string>();
  if (prim == "ball") return body::ball(number_field(j, "r"));
  if (prim == "halfspace") return body::halfspace(vector_field(j, "a"), number_field(j, "c"));
  if (prim == "slab") return body::slab(vector_field(j, "a"), number_field(j, "c"));
  if (prim == "sign") {
    if (!j.contains("rel") || !j["rel"].is_string()) throw ParseError("sign needs 'rel'");
    const auto rel = j["rel"].get<std::string>();
    if (rel != "geq" && rel != "leq") throw ParseError("sign 'rel' must be geq or leq");
    return body::sign(index_field(j, "i"), index_field(j, "j"), rel == "geq");
  }
  throw ParseError("unknown body primitive '" + prim + "'");
}

void to_json(nlohmann::json& j, const BodyDiagnostics& d) {
  j = {{"samples", d.samples},
       {"symmetry_violations", d.symmetry_violations},
       {"convexity_violations", d.convexity_violations},
       {"unbounded_rays", d.unbounded_rays},
       {"absorbing", d.absorbing},
       {"sample_radius", d.sample_radius},
       {"passed", d.passed()}};
  if (d.symmetry_witness) j["symmetry_witness"] = *d.symmetry_witness;
  if (d.convexity_witness) {
    j["convexity_witness"] = {d.convexity_witness->first, d.convexity_witness->second};
  }
  if (d.unbounded_witness) j["unbounded_witness"] = *d.unbounded_witness;
}

}  // namespace latticelab
