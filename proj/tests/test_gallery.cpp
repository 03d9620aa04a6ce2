#include <doctest.h>

#include <algorithm>

#include "latticelab/gallery.hpp"

using namespace latticelab;

TEST_CASE("listing") {
  const auto entries = list_entries();
  auto has = [&](const std::string& name) {
    return std::any_of(entries.begin(), entries.end(),
                       [&](const EntryInfo& e) { return e.name == name; });
  };
  CHECK(has("bbody"));
  CHECK(has("vpullback"));
  CHECK(has("pnorm-reference"));
  CHECK(list_entries().size() == entries.size());
}

TEST_CASE("every entry passes") {
  for (const auto& e : list_entries()) {
    const auto r = run_entry(e.name);
    INFO(gallery_text(r));
    CHECK(r.passed());
    CHECK(!r.rows.empty());
  }
}

TEST_CASE("bbody rows") {
  const auto r = run_entry("bbody");
  REQUIRE(r.rows.size() >= 3);
  CHECK(r.rows[0].provenance == Provenance::kExample);
  CHECK(r.rows[1].expected == 2.0);
  CHECK(r.rows[2].label.find("riesz") != std::string::npos);
}

TEST_CASE("vpullback dimensions") {
  const auto r = run_entry("vpullback", 8);
  CHECK(std::count_if(r.rows.begin(), r.rows.end(), [](const Expectation& e) {
          return e.label.rfind("||v_", 0) == 0;
        }) == 8);
  CHECK(run_entry("vpullback", 64).passed());
  CHECK_THROWS_AS(run_entry("vpullback", 65), ValidationError);
  CHECK_THROWS_AS(run_entry("vpullback", 0), ValidationError);
  CHECK_THROWS_AS(run_entry("nosuch"), UnknownEntryError);
}

TEST_CASE("json table") {
  const nlohmann::json j = run_entry("pnorm-reference");
  CHECK(j["passed"] == true);
  CHECK(j["rows"][0]["provenance"] == "closed-form");
}

TEST_CASE("reference suite is small and compiles") {
  for (const auto& s : reference_suite()) {
    CHECK(s.dim <= 10);
    CHECK(NormOracle::compile(s.spec, s.dim).dim() == s.dim);
  }
}
