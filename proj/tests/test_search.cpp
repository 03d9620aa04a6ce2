#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "latticelab/random.hpp"
#include "latticelab/search.hpp"

using namespace latticelab;

namespace {

double bumpy(std::size_t i) { return std::sin(0.37 * static_cast<double>(i)) * (i % 17); }

}  // namespace

TEST_CASE("combine is order independent") {
  const Best a{1.0, 3};
  const Best b{1.0, 1};
  const Best c{2.0, 9};
  const Best nan{NAN, 0};
  CHECK(combine(a, b).index == 1);
  CHECK(combine(b, a).index == 1);
  CHECK(combine(a, c).index == 9);
  CHECK(combine(nan, a).index == 3);
  CHECK(combine(a, nan).index == 3);
  CHECK(combine(combine(a, b), c).index == combine(a, combine(b, c)).index);
  CHECK(!Best{}.found());
}

TEST_CASE("openmp kernels equal the serial reference") {
  for (std::size_t count : {0u, 1u, 15u, 1000u, 12345u}) {
    CHECK(serial::map(count, bumpy) == omp::map(count, bumpy, 4));
    const auto s = serial::argmax(count, bumpy);
    const auto p = omp::argmax(count, bumpy, 4);
    CHECK(s.index == p.index);
    CHECK((s.value == p.value || (!s.found() && !p.found())));
  }
}

TEST_CASE("kernels rethrow the lowest failing index") {
  auto fn = [](std::size_t i) -> double {
    if (i == 40 || i == 700) throw std::runtime_error(std::to_string(i));
    return 1.0;
  };
  for (int jobs : {1, 4}) {
    try {
      parallel_map(1000, fn, {jobs});
      FAIL("expected exception");
    } catch (const std::runtime_error& e) {
      CHECK(std::string(e.what()) == "40");
    }
  }
}

TEST_CASE("random streams are reproducible and independent") {
  auto a = stream_for(1, 2, 3);
  auto b = stream_for(1, 2, 3);
  auto c = stream_for(1, 2, 4);
  CHECK(a() == b());
  CHECK(stream_for(1, 2, 3)() != c());
  auto r = stream_for(0, 0, 0);
  for (int i = 0; i < 1000; ++i) {
    const double u = uniform01(r);
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
  const auto v = random_unit(r, 5);
  double s = 0.0;
  for (double x : v) s += x * x;
  CHECK(s == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("maximize finds the peak, is deterministic and nested in budget") {
  // Peak of a smooth function on the sphere at direction (1, 2, -2) / 3.
  const Objective obj = [](std::span<const double> x) {
    double n2 = 0.0;
    for (double v : x) n2 += v * v;
    const double d = (x[0] + 2.0 * x[1] - 2.0 * x[2]) / 3.0;
    return d * d / n2;
  };
  SearchSpace space;
  space.dim = 3;
  space.fixed = {{1.0, 0.0, 0.0}};
  space.draw = [](std::mt19937_64& rng) { return random_unit(rng, 3); };

  SearchOptions opt;
  opt.budget = {500, 200};
  const auto serial = maximize(space, obj, [&] {
    auto o = opt;
    o.exec = {1};
    return o;
  }());
  const auto parallel = maximize(space, obj, [&] {
    auto o = opt;
    o.exec = {4};
    return o;
  }());
  CHECK(serial.value == parallel.value);
  CHECK(serial.x == parallel.x);
  CHECK(serial.value == doctest::Approx(1.0).epsilon(1e-9));

  double prev = -1.0;
  for (std::size_t budget : {0u, 10u, 50u, 200u, 1000u}) {
    auto o = opt;
    o.budget = {budget, 20};
    const auto r = maximize(space, obj, o);
    CHECK(r.value >= prev);
    prev = r.value;
  }
  prev = -1.0;
  for (std::size_t polls : {0u, 5u, 20u, 100u}) {
    auto o = opt;
    o.budget = {50, polls};
    const auto r = maximize(space, obj, o);
    CHECK(r.value >= prev);
    prev = r.value;
  }
}

TEST_CASE("refinement polls in fixed order") {
  const Objective obj = [](std::span<const double> x) { return -(x[0] - 1.0) * (x[0] - 1.0) - x[1] * x[1]; };
  const auto r = refine(obj, {0.5, 0.25}, obj(std::vector<double>{0.5, 0.25}), 1000);
  CHECK(r.value > -1e-10);
  const auto r0 = refine(obj, {0.5, 0.25}, obj(std::vector<double>{0.5, 0.25}), 0);
  CHECK(r0.x == std::vector<double>{0.5, 0.25});
}
