#include <doctest.h>

#include <cmath>
#include <random>

#include "latticelab/core.hpp"
#include "latticelab/error.hpp"
#include "oracles.hpp"

using namespace latticelab;

TEST_CASE("measure space validation") {
  CHECK(MeasureSpace::counting(3).total() == 3.0);
  CHECK(MeasureSpace({0.5, 0.25}).total() == 0.75);
  CHECK_THROWS_AS(MeasureSpace({1.0, 0.0}), ValidationError);
  CHECK_THROWS_AS(MeasureSpace({1.0, -2.0}), ValidationError);
  CHECK_THROWS_AS(MeasureSpace({INFINITY}), ValidationError);
}

TEST_CASE("atom set algebra") {
  const AtomSet a(5, {0, 2, 4});
  const AtomSet b(5, {2, 3});
  CHECK((a | b).indices() == std::vector<std::size_t>{0, 2, 3, 4});
  CHECK((a & b).indices() == std::vector<std::size_t>{2});
  CHECK((a - b).indices() == std::vector<std::size_t>{0, 4});
  CHECK(a.complement().indices() == std::vector<std::size_t>{1, 3});
  CHECK(a.count() == 3);
  CHECK(AtomSet(5).empty());
  CHECK(AtomSet::all(5).count() == 5);
  CHECK(AtomSet::from_mask(5, 0b10101) == a);
  CHECK(a.mask() == 0b10101u);
  CHECK_THROWS_AS(a | AtomSet(4), DimensionError);
}

TEST_CASE("func arithmetic and restriction") {
  const Func f{1.0, -2.0, 3.0};
  CHECK((f + f) == Func{2.0, -4.0, 6.0});
  CHECK((f - f).is_zero());
  CHECK((-f) == Func{-1.0, 2.0, -3.0});
  CHECK((2.0 * f) == Func{2.0, -4.0, 6.0});
  CHECK(f.sup_norm() == 3.0);
  CHECK(restrict(f, AtomSet(3, {1})) == Func{0.0, -2.0, 0.0});
  CHECK(hadamard(f, Func{0.0, 1.0, -1.0}) == Func{0.0, -2.0, -3.0});
  CHECK(Func::indicator(AtomSet(3, {0, 2})) == Func{1.0, 0.0, 1.0});
  CHECK(Func::basis(3, 1) == Func{0.0, 1.0, 0.0});
  CHECK_THROWS_AS(restrict(f, AtomSet(2)), DimensionError);
  CHECK_THROWS_AS(f + Func{1.0}, DimensionError);
  CHECK_THROWS_AS(Func({NAN}), ValidationError);
}

TEST_CASE("lattice operations") {
  const Func f{-1.5, 0.0, 2.0, -0.0};
  const auto parts = abs_parts(f);
  CHECK(parts.abs == Func{1.5, 0.0, 2.0, 0.0});
  CHECK(parts.pos == Func{0.0, 0.0, 2.0, 0.0});
  CHECK(parts.neg == Func{1.5, 0.0, 0.0, 0.0});
  CHECK((parts.pos - parts.neg) == f);
  CHECK(!std::signbit(parts.abs[3]));
  CHECK(pointwise_max(f, Func{0.0, 1.0, 1.0, 0.0}) == Func{0.0, 1.0, 2.0, 0.0});
}

TEST_CASE("disjointify examples") {
  SimpleRep rep{Func{1.0, 1.0, 1.0}, {{2.0, AtomSet(3, {0, 1})}, {3.0, AtomSet(3, {1, 2})}}};
  const auto d = disjointify(rep);
  REQUIRE(d.pieces.size() == 3);
  CHECK(d.pieces[0].coefficient == 2.0);
  CHECK(d.pieces[0].set == AtomSet(3, {0}));
  CHECK(d.pieces[1].coefficient == 5.0);
  CHECK(d.pieces[1].set == AtomSet(3, {1}));
  CHECK(d.pieces[2].coefficient == 3.0);
  CHECK(d.pieces[2].set == AtomSet(3, {2}));
  CHECK(evaluate(d) == evaluate(rep));
  CHECK(pairwise_disjoint(d));

  SimpleRep cancel{Func{1.0, 2.0}, {{1.0, AtomSet(2, {0, 1})}, {-1.0, AtomSet(2, {0, 1})}}};
  const auto n = normalize(disjointify(cancel));
  CHECK(n.pieces.empty());
  CHECK(evaluate(n).is_zero());
}

TEST_CASE("disjointify matches the direct sum on random representations") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + rng() % 16;
    SimpleRep rep{Func(oracle::random_vector(rng, n, 3.0)), {}};
    const std::size_t m = rng() % 9;
    for (std::size_t i = 0; i < m; ++i) {
      rep.pieces.push_back({std::round(oracle::random_vector(rng, 1, 8.0)[0] * 4.0) / 4.0,
                            AtomSet::from_mask(n, rng() & ((std::uint64_t{1} << n) - 1))});
    }
    const auto d = disjointify(rep);
    CHECK(pairwise_disjoint(d));
    CHECK(evaluate(d).values() == oracle::direct_sum(rep));
    CHECK(evaluate(rep).values() == oracle::direct_sum(rep));
  }
}

TEST_CASE("json round trip") {
  const Func f{1.0, -2.5};
  nlohmann::json j = f;
  CHECK(j.get<Func>() == f);
  const AtomSet s(4, {1, 3});
  CHECK(atom_set_from_json(nlohmann::json(s), 4) == s);
  CHECK_THROWS_AS(atom_set_from_json(nlohmann::json::parse("[\"x\"]"), 4), ParseError);
  CHECK_THROWS(atom_set_from_json(nlohmann::json::parse("[7]"), 4));
  const MeasureSpace mu({0.5, 2.0});
  CHECK(measure_space_from_json(nlohmann::json(mu)).weights() == mu.weights());
  CHECK_THROWS_AS(nlohmann::json::parse("[1, \"a\"]").get<Func>(), ParseError);
}
