#include <doctest.h>

#include <cmath>
#include <random>

#include "latticelab/error.hpp"
#include "latticelab/norms.hpp"
#include "oracles.hpp"

using namespace latticelab;

namespace {

std::vector<double> vbasis_weights(std::size_t n) {
  std::vector<double> w(n);
  for (std::size_t k = 0; k < n; ++k) w[k] = 1.0 / static_cast<double>(k + 1);
  return w;
}

}  // namespace

TEST_CASE("p-norm values against the reference") {
  std::mt19937_64 rng(3);
  const std::vector<double> w{1.0, 2.0, 0.5, 3.0};
  for (double p : {1.0, 1.5, 2.0, 3.0, kInfinity}) {
    const auto plain = NormOracle::compile(spec::pnorm(p), 4);
    const auto weighted = NormOracle::compile(spec::pnorm(p, w));
    for (int i = 0; i < 200; ++i) {
      const auto x = oracle::random_vector(rng, 4, 10.0);
      const double e1 = oracle::pnorm(x, p);
      const double e2 = oracle::pnorm(x, p, w);
      CHECK(std::abs(plain(x) - e1) <= 1e-12 * e1);
      CHECK(std::abs(weighted(x) - e2) <= 1e-12 * e2);
    }
  }
  CHECK(NormOracle::compile(spec::pnorm(2.0), 2)(Func{3.0, 4.0}) == doctest::Approx(5.0).epsilon(1e-15));
}

TEST_CASE("partial-sum pullback") {
  for (std::size_t n : {1u, 2u, 5u, 64u}) {
    const auto norm = NormOracle::compile(spec::vbasis_pullback(n));
    for (std::size_t k = 1; k <= n; ++k) {
      Func v(n);
      for (std::size_t i = 0; i < k; ++i) v[i] = 1.0;
      const double expected = 1.0 / static_cast<double>(k);
      CHECK(std::abs(norm(v) - expected) <= 1e-12 * expected);
    }
  }
  const auto n2 = NormOracle::compile(spec::vbasis_pullback(2));
  CHECK(n2(Func{1.0, 0.0}) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(n2(Func{-1.0, 1.0}) == doctest::Approx(std::sqrt(17.0) / 2.0).epsilon(1e-14));

  std::mt19937_64 rng(5);
  const auto n7 = NormOracle::compile(spec::vbasis_pullback(7));
  for (int i = 0; i < 200; ++i) {
    const auto x = oracle::random_vector(rng, 7);
    CHECK(std::abs(n7(x) - oracle::vbasis(x)) <= 1e-12 * oracle::vbasis(x));
  }
  CHECK(nlohmann::json(*spec::vbasis_pullback(3)) ==
        nlohmann::json(*spec::pullback({{1, 1, 1}, {0, 1, 1}, {0, 0, 1}},
                                       spec::pnorm(2.0, vbasis_weights(3)))));
}

TEST_CASE("pullback construction") {
  CHECK_THROWS_AS(NormOracle::compile(spec::pullback({{1, 2}, {2, 4}}, spec::pnorm(2.0))),
                  ValidationError);
  CHECK_THROWS_AS(NormOracle::compile(spec::pullback({{1, 2}}, spec::pnorm(2.0))),
                  ValidationError);
  const auto ill = NormOracle::compile(spec::pullback({{1, 1}, {1, 1 + 1e-14}}, spec::pnorm(2.0)));
  CHECK(!ill.warnings().empty());
  CHECK(NormOracle::compile(spec::vbasis_pullback(4)).warnings().empty());
}

TEST_CASE("rectangularization") {
  std::mt19937_64 rng(9);
  const auto l2 = NormOracle::compile(spec::pnorm(2.0), 5);
  const auto rl2 = NormOracle::compile(spec::rectangularized(spec::pnorm(2.0)), 5);
  for (int i = 0; i < 100; ++i) {
    const auto x = oracle::random_vector(rng, 5);
    CHECK(std::abs(rl2(x) - l2(x)) <= 1e-15 * l2(x));
  }
  const auto rv = NormOracle::compile(spec::rectangularized(spec::vbasis_pullback(2)));
  CHECK(rv(Func{1.0, 1.0}) == doctest::Approx(std::sqrt(5.0) / 2.0).epsilon(1e-14));
  const auto rb = NormOracle::compile(spec::rectangularized(spec::gauge(body::sign_split_disc())));
  CHECK(std::abs(rb(Func{-1.0, 1.0}) - 2.0) <= 1e-9);

  CHECK_THROWS_AS(NormOracle::compile(spec::rectangularized(spec::pnorm(2.0)), 25),
                  ValidationError);
  const auto sampled =
      NormOracle::compile(spec::rectangularized_sampled(spec::pnorm(2.0), 100, 1), 30);
  CHECK(sampled.lower_bound_only());
  Func ones(std::vector<double>(30, 1.0));
  CHECK(sampled(ones) == doctest::Approx(std::sqrt(30.0)));
}

TEST_CASE("modulus norm") {
  const auto vb = NormOracle::compile(spec::vnorm(spec::gauge(body::sign_split_disc())));
  CHECK(std::abs(vb(Func{-1.0, 1.0}) - std::sqrt(2.0)) <= 1e-9);
  const auto vp = NormOracle::compile(spec::vnorm(spec::vbasis_pullback(2)));
  CHECK(vp(Func{-1.0, 1.0}) == doctest::Approx(0.5).epsilon(1e-14));
  std::mt19937_64 rng(2);
  const auto l3 = NormOracle::compile(spec::pnorm(3.0), 4);
  const auto vl3 = NormOracle::compile(spec::vnorm(spec::pnorm(3.0)), 4);
  for (int i = 0; i < 100; ++i) {
    const auto x = oracle::random_vector(rng, 4);
    CHECK(vl3(x) == l3(x));
  }
}

TEST_CASE("scaled norm and measure spaces") {
  const auto s = NormOracle::compile(spec::scaled(1.5, spec::pnorm(1.0)), 2);
  CHECK(s(Func{1.0, -1.0}) == 3.0);
  CHECK_THROWS_AS(NormOracle::compile(spec::scaled(0.0, spec::pnorm(1.0)), 2), ValidationError);
  const auto lp = NormOracle::compile(spec::lp_of_measure(MeasureSpace({0.25, 4.0}), 2.0));
  CHECK(lp(Func{2.0, 0.5}) == doctest::Approx(std::sqrt(0.25 * 4.0 + 4.0 * 0.25)));
}

TEST_CASE("compile errors") {
  CHECK_THROWS_AS(NormOracle::compile(spec::pnorm(2.0)), ValidationError);
  CHECK_THROWS_AS(NormOracle::compile(spec::pnorm(2.0, {1.0, 1.0}), 3), ValidationError);
  CHECK_THROWS_AS(NormOracle::compile(spec::pnorm(0.5), 2), ValidationError);
  CHECK_THROWS_AS(NormOracle::compile(spec::pnorm(2.0, {1.0, -1.0})), ValidationError);
  auto deep = spec::pnorm(2.0);
  for (int i = 0; i < 10; ++i) deep = spec::vnorm(deep);
  CHECK_THROWS_AS(NormOracle::compile(deep, 2), ValidationError);
  const auto n = NormOracle::compile(spec::pnorm(2.0), 2);
  CHECK_THROWS_AS(n(Func{1.0, 2.0, 3.0}), DimensionError);
}

TEST_CASE("spec json") {
  const auto s = norm_spec_from_string(
      R"({"type":"scaled","c":2,"inner":{"type":"vnorm","inner":{"type":"pnorm","p":"inf","weights":[1,2]}}})");
  const auto n = NormOracle::compile(s);
  CHECK(n(Func{1.0, -3.0}) == 12.0);
  const auto back = norm_spec_from_json(nlohmann::json(*s));
  CHECK(nlohmann::json(*back) == nlohmann::json(*s));
  CHECK_THROWS_AS(norm_spec_from_string("{"), ParseError);
  CHECK_THROWS_AS(norm_spec_from_string(R"({"type":"banana"})"), ParseError);
  CHECK_THROWS_AS(norm_spec_from_string(R"({"type":"pnorm"})"), ParseError);
  CHECK_THROWS_AS(NormOracle::compile(norm_spec_from_string(R"({"type":"pnorm","p":0.2})"), 2),
                  ValidationError);
}

TEST_CASE("norm axioms on random inputs for every built-in variant") {
  const std::vector<std::pair<NormSpecPtr, std::size_t>> specs{
      {spec::pnorm(1.0), 4},
      {spec::pnorm(2.5, {1.0, 2.0, 3.0, 4.0}), 4},
      {spec::pnorm(kInfinity), 4},
      {spec::vbasis_pullback(4), 4},
      {spec::gauge(body::sign_split_disc()), 2},
      {spec::gauge(body::intersect({body::ball(1.0), body::slab({1.0, 1.0, 1.0}, 1.0)})), 3},
      {spec::rectangularized(spec::vbasis_pullback(4)), 4},
      {spec::vnorm(spec::rectangularized(spec::vbasis_pullback(3))), 3},
      {spec::scaled(0.7, spec::pnorm(2.0)), 3},
  };
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> c(-5.0, 5.0);
  for (const auto& [s, n] : specs) {
    const auto norm = NormOracle::compile(s, n);
    const double tol = std::max(1e-9, 4.0 * norm.resolution());
    for (int i = 0; i < 1000; ++i) {
      const Func f(oracle::random_vector(rng, n));
      const Func g(oracle::random_vector(rng, n));
      const double a = c(rng);
      const double nf = norm(f);
      CHECK(nf >= 0.0);
      CHECK(std::abs(norm(a * f) - std::abs(a) * nf) <= tol * std::abs(a) * nf);
      CHECK(norm(f + g) <= (nf + norm(g)) * (1.0 + tol));
      if (f.sup_norm() >= 1e-6) CHECK(nf > 0.0);
    }
  }
}
